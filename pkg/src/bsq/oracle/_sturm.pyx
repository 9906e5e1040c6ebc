# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Sturm-sequence eigenvalue bisection for symmetric tridiagonal matrices (compiled)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, fmax

cdef double TINY = 1e-300
cdef double EPS = 2.220446049250313e-16


cdef Py_ssize_t _count(const double[::1] d, const double[::1] e2, double x) noexcept nogil:
    cdef Py_ssize_t i, n = d.shape[0], neg = 0
    cdef double q = d[0] - x
    if q == 0.0:
        q = -TINY
    if q < 0.0:
        neg += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if q == 0.0:
            q = -TINY
        if q < 0.0:
            neg += 1
    return neg


def sturm_count(const double[::1] d, const double[::1] e2, double x):
    """Number of eigenvalues strictly below ``x``."""
    return _count(d, e2, x)


def bisect_eigenvalues(const double[::1] d, const double[::1] e2, Py_ssize_t first,
                       Py_ssize_t count, double lower, double upper, double abstol=0.0):
    """Eigenvalues ``first .. first+count-1`` (ascending) inside [lower, upper].

    Every count evaluation tightens the brackets of all requested indices,
    so later indices start from intervals already narrowed by earlier ones.
    """
    cdef double[::1] lo = np.full(count, lower)
    cdef double[::1] hi = np.full(count, upper)
    cdef Py_ssize_t j, i, c
    cdef double x, tol
    with nogil:
        for j in range(count):
            while True:
                tol = 2.0 * EPS * fmax(fabs(lo[j]), fabs(hi[j])) + abstol
                if hi[j] - lo[j] <= tol:
                    break
                x = 0.5 * (lo[j] + hi[j])
                if x <= lo[j] or x >= hi[j]:
                    break
                c = _count(d, e2, x)
                for i in range(j, count):
                    if c > first + i:
                        if x < hi[i]:
                            hi[i] = x
                    elif x > lo[i]:
                        lo[i] = x
    out = np.empty(count)
    for j in range(count):
        out[j] = 0.5 * (lo[j] + hi[j])
    return out
