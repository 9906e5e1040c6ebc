"""Pure numpy fallback for the Sturm-sequence kernel.

Instead of one shift at a time, each sweep evaluates the Sturm count at a
batch of shifts inside every open bracket (multisection), vectorising the
recurrence over shifts so the Python-level loop runs once per matrix row.
"""

import numpy as np

_TINY = 1e-300
_EPS = np.finfo(float).eps
SHIFTS = 64


def _counts(d, e2, x):
    x = np.asarray(x, dtype=float)
    q = d[0] - x
    q[q == 0.0] = -_TINY
    neg = (q < 0).astype(np.int64)
    for i in range(1, d.shape[0]):
        q = d[i] - x - e2[i - 1] / q
        q[q == 0.0] = -_TINY
        neg += q < 0
    return neg


def sturm_count(d, e2, x):
    """Number of eigenvalues strictly below ``x``."""
    return int(_counts(np.ascontiguousarray(d, float), np.ascontiguousarray(e2, float), np.array([x]))[0])


def bisect_eigenvalues(d, e2, first, count, lower, upper, abstol=0.0):
    """Eigenvalues ``first .. first+count-1`` (ascending) inside [lower, upper]."""
    d = np.ascontiguousarray(d, float)
    e2 = np.ascontiguousarray(e2, float)
    lo = np.full(count, float(lower))
    hi = np.full(count, float(upper))
    idx = first + np.arange(count)
    frac = np.arange(1, SHIFTS + 1) / (SHIFTS + 1.0)
    while True:
        tol = 2.0 * _EPS * np.maximum(np.abs(lo), np.abs(hi)) + abstol
        open_ = np.flatnonzero(hi - lo > tol)
        if open_.size == 0:
            break
        # shared shifts: brackets of neighbouring levels often coincide
        x = np.unique((lo[open_, None] + (hi - lo)[open_, None] * frac).ravel())
        c = _counts(d, e2, x)
        # for each level, the largest shift with count <= index and the smallest with count > index
        below = c[None, :] <= idx[open_, None]
        xs = np.broadcast_to(x, below.shape)
        new_lo = np.where(below, xs, -np.inf).max(axis=1)
        new_hi = np.where(~below, xs, np.inf).min(axis=1)
        lo_o, hi_o = lo[open_], hi[open_]
        lo[open_] = np.maximum(lo_o, new_lo)
        hi[open_] = np.minimum(hi_o, new_hi)
        stuck = (lo[open_] == lo_o) & (hi[open_] == hi_o)
        if np.all(stuck):
            break
    return 0.5 * (lo + hi)
