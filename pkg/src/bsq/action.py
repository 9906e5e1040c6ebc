"""Direct evaluation of the action integral and Bohr-Sommerfeld quantization.

The action J(E) = 2 * integral of sqrt(2m(E - V)) between the turning points
is computed after the substitution x = c + r sin(theta), which turns the
square-root endpoint behaviour into a smooth periodic-like integrand that
Gauss-Legendre handles to machine precision with a few dozen nodes.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import roots_legendre

from .errors import (
    AccuracyError,
    DomainError,
    InvalidEnergyError,
    NotApplicableError,
    UnboundLevelError,
)
from .potentials import LJFamily, Morse, Potential, SpectrumLevel

_EPS = np.finfo(float).eps
MAX_POINTS = 1 << 14


@dataclass(frozen=True)
class QuantizerSettings:
    root_tolerance: float = 1e-12
    quadrature_points: int = 64
    max_bisections: int = 200

    def __post_init__(self):
        if not 0 < self.root_tolerance <= 1e-3:
            raise ValueError("root_tolerance must lie in (0, 1e-3]")
        if self.quadrature_points < 16:
            raise ValueError("quadrature_points must be >= 16")

    @classmethod
    def from_env(cls, **overrides) -> "QuantizerSettings":
        """Defaults, with BSQ_SEED_TOLERANCE overriding the root tolerance."""
        env = os.environ.get("BSQ_SEED_TOLERANCE")
        if env and "root_tolerance" not in overrides:
            overrides["root_tolerance"] = float(env)
        return cls(**overrides)


DEFAULT_SETTINGS = QuantizerSettings()


@dataclass(frozen=True)
class ActionResult:
    energy: float
    action: float
    x_left: float
    x_right: float
    error_estimate: float
    period: float = math.nan


@lru_cache(maxsize=None)
def _theta_rule(n: int):
    # Gauss-Legendre clusters nodes at the turning points, which matters when the
    # two walls differ in length scale by many decades (open LJ wells near E = 0).
    # scipy's generator is O(n^2); numpy's companion-matrix route is O(n^3).
    t, w = roots_legendre(n)
    half = 0.5 * math.pi
    return t * half, w * half


def _window(spec: Potential, E: float):
    x0, vmin = spec.minimum()
    top = spec.dissociation()
    if not (vmin <= E < top):
        raise InvalidEnergyError(f"E={E!r} outside the bound window ({vmin}, {top})")
    return x0, vmin


def turning_points_numeric(spec: Potential, E: float) -> Tuple[float, float]:
    """Both roots of V(x) = E around the minimum."""
    x0, vmin = _window(spec, E)
    if E == vmin:
        return x0, x0
    if isinstance(spec, LJFamily):
        return _lj_turning_points(spec, E)
    return _march_root(spec, x0, E, -1.0), _march_root(spec, x0, E, 1.0)


def _lj_turning_points(spec: LJFamily, E: float):
    # V = E is quadratic in y = (a/x)^k: y^2 - y + eps = 0
    eps = -E / spec.V0
    disc = math.sqrt(max(1.0 - 4.0 * eps, 0.0))
    y_far = 2.0 * eps / (1.0 + disc)
    y_near = 0.5 * (1.0 + disc)
    k = spec.k
    return spec.a * y_near ** (-1.0 / k), spec.a * y_far ** (-1.0 / k)


def _march_root(spec: Potential, x0: float, E: float, sign: float) -> float:
    lo, hi = spec.domain
    edge = hi if sign > 0 else lo
    step = 1e-3 * spec.length_scale
    inner = x0
    while True:
        outer = x0 + sign * step
        if (sign > 0 and outer >= edge) or (sign < 0 and outer <= edge):
            # walls that diverge at the domain edge: close in geometrically
            outer = 0.5 * (inner + edge)
            if outer == inner:
                raise AccuracyError("turning point not bracketed before the domain edge")
        try:
            v = spec(outer)
        except DomainError:
            v = math.inf
        if v >= E:
            break
        inner = outer
        step *= 2.0
        if step > 1e12 * spec.length_scale:
            raise InvalidEnergyError("no turning point: the well is open on this side")
    if not math.isfinite(v):
        # tighten until the outer end is evaluable
        while not math.isfinite(v):
            outer = 0.5 * (inner + outer)
            try:
                v = spec(outer)
            except DomainError:
                v = math.inf
        if v < E:
            inner = outer
            outer = x0 + sign * step
    f = lambda x: _safe(spec, x) - E
    a, b = sorted((inner, outer))
    return brentq(f, a, b, xtol=4 * _EPS * max(abs(a), abs(b), spec.length_scale * 1e-300), rtol=4 * _EPS, maxiter=400)


def _safe(spec, x):
    try:
        return spec(x)
    except DomainError:
        return math.inf


def _quadrature(spec, E, xl, xr, n):
    theta, w = _theta_rule(n)
    c, r = 0.5 * (xl + xr), 0.5 * (xr - xl)
    x = c + r * np.sin(theta)
    kin = np.maximum(E - spec(x), 0.0)
    jac = r * np.cos(theta)
    m = spec.constants.mass
    momentum = np.sqrt(2.0 * m * kin)
    action = 2.0 * float(np.dot(w, momentum * jac))
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(momentum > 0, m / momentum, 0.0)
    period = 2.0 * float(np.dot(w, inv * jac))
    return action, period


def action_integral(spec: Potential, E: float, settings: QuantizerSettings = DEFAULT_SETTINGS) -> ActionResult:
    """J(E) with an error estimate from doubling the quadrature order."""
    x0, vmin = _window(spec, E)
    if E == vmin:
        raise InvalidEnergyError("E must lie strictly above the minimum")
    xl, xr = turning_points_numeric(spec, E)
    n = settings.quadrature_points
    coarse, _ = _quadrature(spec, E, xl, xr, n)
    while True:
        fine, period = _quadrature(spec, E, xl, xr, 2 * n)
        err = abs(fine - coarse)
        if err <= 1e-13 * fine or 2 * n >= MAX_POINTS:
            break
        coarse, n = fine, 2 * n
    if err > 1e-8 * fine:
        raise AccuracyError(f"action quadrature did not converge at E={E!r} (err={err:.3e})")
    return ActionResult(E, fine, xl, xr, err, period)


def threshold_action(spec: Potential, settings: QuantizerSettings = DEFAULT_SETTINGS) -> float:
    """Action at the dissociation threshold.

    Closed forms for Morse and the Lennard-Jones family; other finite wells
    use :func:`limiting_action`.  Returns ``math.inf`` when the action
    diverges (Lennard-Jones with k <= 2).
    """
    if not math.isfinite(spec.dissociation()):
        raise NotApplicableError(f"{spec.kind}: spectrum is unbounded, no threshold")
    c = spec.constants
    if isinstance(spec, Morse):
        return 2.0 * math.pi / spec.a * math.sqrt(2.0 * c.mass * spec.V0)
    if isinstance(spec, LJFamily):
        k = spec.k
        if k <= 2:
            return math.inf
        return (math.sqrt(math.pi) * 2.0 ** (-1.0 / k)
                * math.gamma(0.5 - 1.0 / k) / math.gamma(2.0 - 1.0 / k)
                * spec.V0 / spec.omega)
    return limiting_action(spec, settings)


def limiting_action(spec: Potential, settings: QuantizerSettings = DEFAULT_SETTINGS,
                    offsets=(1e-4, 1e-6, 1e-8)) -> float:
    """J at threshold by quadrature just below it plus Aitken extrapolation.

    ``offsets`` are distances below threshold in units of the well depth.
    Assumes J_threshold - J(E) behaves as a power of the distance, which
    holds for every well with a finite threshold action.
    """
    top = spec.dissociation()
    if not math.isfinite(top):
        raise NotApplicableError(f"{spec.kind}: spectrum is unbounded, no threshold")
    _, vmin = spec.minimum()
    depth = top - vmin
    j = [action_integral(spec, top - f * depth, settings).action for f in offsets]
    d1, d2 = j[1] - j[0], j[2] - j[1]
    if d1 == 0 or d2 == 0 or d2 / d1 >= 1.0:
        return j[2]
    ratio = d2 / d1
    return j[2] + d2 * ratio / (1.0 - ratio)


def level_count(spec: Potential, settings: QuantizerSettings = DEFAULT_SETTINGS):
    """Number of bound levels, floor(J_threshold/h - 1/2) + 1 (``math.inf`` if J diverges)."""
    j0 = threshold_action(spec, settings)
    if math.isinf(j0):
        return math.inf
    return int(math.floor(j0 / spec.constants.h - 0.5)) + 1


def quantize(spec: Potential, n: int, settings: QuantizerSettings = DEFAULT_SETTINGS) -> SpectrumLevel:
    """Solve J(E) = (n + 1/2) h for E."""
    if int(n) != n or n < 0:
        raise ValueError("n must be a non-negative integer")
    target = (n + 0.5) * spec.constants.h
    x0, vmin = spec.minimum()
    top = spec.dissociation()
    if math.isfinite(top):
        j0 = threshold_action(spec, settings)
        if target >= j0:
            raise UnboundLevelError(f"n={n} lies above the last bound level")
        scale = top - vmin
        lo, hi = vmin + 1e-12 * scale, top - 1e-12 * scale
    else:
        curv = spec.derivatives(2)[2]
        hw = spec.constants.hbar * math.sqrt(curv / spec.constants.mass)
        lo = vmin + 1e-12 * hw
        hi = vmin + 2.0 * (n + 0.5) * hw
        while action_integral(spec, hi, settings).action < target:
            hi = vmin + 2.0 * (hi - vmin)
        scale = hi - vmin

    def residual(E):
        res = action_integral(spec, E, settings)
        return res.action - target, res.period

    bisections = 0
    while (hi - lo) > 1e-3 * max(abs(hi), abs(lo), 1e-300) and (hi - lo) > 1e-3 * scale:
        mid = 0.5 * (lo + hi)
        if residual(mid)[0] < 0:
            lo = mid
        else:
            hi = mid
        bisections += 1
        if bisections > settings.max_bisections:
            raise AccuracyError("bisection budget exhausted")

    E = 0.5 * (lo + hi)
    for _ in range(100):
        f, period = residual(E)
        if f < 0:
            lo = E
        else:
            hi = E
        step = f / period if period > 0 else math.nan
        new = E - step
        if not (lo < new < hi):
            new = 0.5 * (lo + hi)
        if abs(new - E) <= 4 * _EPS * max(abs(E), scale * 1e-3):
            E = new
            break
        E = new
    f, _ = residual(E)
    if abs(f) > settings.root_tolerance * target:
        raise AccuracyError(f"quantizer residual {abs(f) / target:.2e} above tolerance")
    return SpectrumLevel(n, E, "numericBS")


def quantized_spectrum(spec: Potential, levels, settings: QuantizerSettings = DEFAULT_SETTINGS):
    return [quantize(spec, n, settings) for n in levels]
