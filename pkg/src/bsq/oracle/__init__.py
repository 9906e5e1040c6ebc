"""Finite-difference Schrodinger eigenvalues as an independent reference.

The Hamiltonian -(hbar^2/2m) d^2/dx^2 + V is discretised with the three-point
Laplacian on a uniform grid with Dirichlet ends.  The resulting symmetric
tridiagonal matrix is solved by Sturm-sequence bisection, which brackets each
eigenvalue rigorously.  Every solve runs on three nested grids (h, h/2, h/4)
and returns the Richardson-extrapolated values, after checking that the two
extrapolations agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ..action import level_count, quantize
from ..errors import (
    DomainError,
    GridError,
    ResolutionError,
    ShapeError,
    UnboundLevelError,
)
from ..potentials import LJFamily, Potential, PoschlTellerTrig, SpectrumLevel
from ._kernel import BACKEND, bisect_eigenvalues, sturm_count

__all__ = [
    "BACKEND",
    "GridSettings",
    "OracleSpectrum",
    "SpectrumComparison",
    "compare_spectra",
    "default_grid",
    "discretized_levels",
    "solve_bound_states",
]

MIN_POINTS = 500
RESOLUTION = 1e-5
DECAY_EXPONENT = 18.0   # integral of kappa beyond each turning point
WAVES_PER_STEP = 0.08   # h * k_max
MAX_POINTS = 60_000


@dataclass(frozen=True)
class GridSettings:
    """Uniform grid from ``xMin`` to ``xMax`` with ``points`` nodes, ends included."""

    xMin: float
    xMax: float
    points: int

    def __post_init__(self):
        if self.points < MIN_POINTS:
            raise GridError(f"points must be >= {MIN_POINTS}")
        if not self.xMin < self.xMax:
            raise GridError("xMin must be below xMax")

    @property
    def step(self) -> float:
        return (self.xMax - self.xMin) / (self.points - 1)

    def refined(self, times: int = 1) -> "GridSettings":
        """Grid with the step halved ``times`` times; old nodes are kept."""
        p = self.points
        for _ in range(times):
            p = 2 * p - 1
        return GridSettings(self.xMin, self.xMax, p)

    def interior(self) -> np.ndarray:
        return np.linspace(self.xMin, self.xMax, self.points)[1:-1]


def validate_grid(spec: Potential, grid: GridSettings, top_energy: Optional[float] = None) -> None:
    """Check that the minimum is inside and, when given, the walls reach ``top_energy``."""
    x0, _ = spec.minimum()
    if not grid.xMin < x0 < grid.xMax:
        raise GridError("the well minimum must lie inside the grid")
    lo, hi = spec.domain
    if grid.xMin < lo or grid.xMax > hi:
        raise GridError("grid extends outside the potential's domain")
    if top_energy is None:
        return
    for end, edge in ((grid.xMin, lo), (grid.xMax, hi)):
        if end == edge:
            continue  # hard wall at the domain boundary
        if spec(end) < top_energy:
            raise GridError(f"V({end}) lies below the requested top energy")


def _hamiltonian(spec: Potential, grid: GridSettings):
    x = grid.interior()
    h = grid.step
    c = spec.constants
    t = c.hbar**2 / (2.0 * c.mass * h * h)
    try:
        v = np.asarray(spec(x), dtype=float)
    except DomainError as exc:
        raise GridError(f"potential undefined on the grid: {exc}") from exc
    d = np.ascontiguousarray(v + 2.0 * t)
    e2 = np.full(d.size - 1, t * t)
    return d, e2, t


def discretized_levels(spec: Potential, grid: GridSettings, count: int,
                       upper: Optional[float] = None) -> np.ndarray:
    """Lowest ``count`` eigenvalues of the discretised Hamiltonian below ``upper``.

    Returns fewer values when fewer eigenvalues lie below ``upper``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    d, e2, t = _hamiltonian(spec, grid)
    g_lo = float(d.min() - 2.0 * t)
    g_hi = float(d.max() + 2.0 * t)
    if upper is not None and math.isfinite(upper) and upper < g_hi:
        count = min(count, sturm_count(d, e2, upper))
        g_hi = upper
    if count == 0:
        return np.empty(0)
    abstol = 1e-15 * max(abs(g_lo), abs(g_hi), t)
    return np.asarray(bisect_eigenvalues(d, e2, 0, count, g_lo, g_hi, abstol))


def _scale_floor(spec: Potential) -> float:
    _, vmin = spec.minimum()
    top = spec.dissociation()
    if math.isfinite(top):
        return 1e-3 * (top - vmin)
    return 1e-3 * abs(spec.energy_scale)


@dataclass(frozen=True)
class OracleSpectrum:
    """Extrapolated levels plus convergence diagnostics; behaves as a sequence of levels."""

    levels: List[SpectrumLevel]
    requested: int
    grid: GridSettings
    raw: np.ndarray = field(repr=False)   # shape (3, count): grids h, h/2, h/4
    count_short: bool = False

    def __iter__(self):
        return iter(self.levels)

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    @property
    def energies(self) -> np.ndarray:
        return np.array([lv.energy for lv in self.levels])

    @property
    def shift_ratios(self) -> np.ndarray:
        """(E_h - E_h/2) / (E_h/2 - E_h/4) per level; about 4 for a second-order scheme."""
        r = self.raw
        return (r[0] - r[1]) / (r[1] - r[2])


def solve_bound_states(spec: Potential, grid: Optional[GridSettings] = None, count: int = 1) -> OracleSpectrum:
    """Lowest ``count`` bound states by finite differences with Richardson extrapolation."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if grid is None:
        grid = default_grid(spec, count)
    validate_grid(spec, grid)
    top = spec.dissociation()
    fine = discretized_levels(spec, grid.refined(2), count, upper=top)
    got = fine.size
    if got == 0:
        return OracleSpectrum([], count, grid, np.empty((3, 0)), True)
    # Dirichlet ends below the top level would confine it artificially
    validate_grid(spec, grid, top_energy=float(fine[-1]))
    mid = discretized_levels(spec, grid.refined(1), got)
    coarse = discretized_levels(spec, grid, got)
    r1 = (4.0 * mid - coarse) / 3.0
    r2 = (4.0 * fine - mid) / 3.0
    floor = _scale_floor(spec)
    rel = np.abs(r2 - r1) / np.maximum(np.abs(r2), floor)
    if np.any(rel > RESOLUTION):
        worst = int(np.argmax(rel))
        raise ResolutionError(
            f"level {worst} moved by {rel[worst]:.2e} relative under grid refinement; "
            f"use more points")
    levels = [SpectrumLevel(n, float(e), "oracle") for n, e in enumerate(r2)]
    return OracleSpectrum(levels, count, grid, np.vstack([coarse, mid, fine]), got < count)


def _top_energy(spec: Potential, count: int) -> float:
    """Semiclassical energy of the highest requested level that is bound."""
    n = count - 1
    if math.isfinite(spec.dissociation()):
        n = min(n, level_count(spec) - 1)
    try:
        return quantize(spec, max(n, 0)).energy
    except UnboundLevelError:
        # no bound level at all: size the grid for the bottom of the well
        _, vmin = spec.minimum()
        return vmin + 0.5 * (spec.dissociation() - vmin)


def _wall(spec: Potential, start: float, E: float, sign: float, limit: float) -> float:
    """March outward from a turning point until the decay integral reaches its target."""
    c = spec.constants
    L = spec.length_scale
    step = 1e-3 * L
    x, acc = start, 0.0
    while acc < DECAY_EXPONENT:
        nxt = x + sign * step
        if (sign > 0 and nxt >= limit) or (sign < 0 and nxt <= limit):
            return limit
        try:
            v = spec(nxt)
        except DomainError:
            return limit
        if not math.isfinite(v):
            return nxt
        acc += math.sqrt(2.0 * c.mass * max(v - E, 0.0)) / c.hbar * step
        x = nxt
        step *= 1.05
        if abs(x - start) > 1e4 * L:
            break
    return x


def default_grid(spec: Potential, count: int = 1) -> GridSettings:
    """Grid sized for the lowest ``count`` levels of ``spec``.

    The range extends past the outermost turning points until the classically
    forbidden decay exponent reaches 18; the step resolves the largest local
    wavenumber with 12.5 points per radian.  Hard-wall kinds use the wall as
    the boundary and Lennard-Jones grids start at 0.35 a.
    """
    from ..action import turning_points_numeric

    E = _top_energy(spec, count)
    x0, vmin = spec.minimum()
    c = spec.constants
    k_max = math.sqrt(2.0 * c.mass * (E - vmin)) / c.hbar
    lo, hi = spec.domain
    if isinstance(spec, PoschlTellerTrig):
        x_min, x_max = lo, hi
    else:
        xl, xr = turning_points_numeric(spec, E)
        if isinstance(spec, LJFamily):
            x_min = 0.35 * spec.a
        else:
            x_min = _wall(spec, xl, E, -1.0, lo)
        x_max = _wall(spec, xr, E, 1.0, hi)
    h = min(WAVES_PER_STEP / k_max, 0.02 * spec.length_scale)
    points = max(MIN_POINTS, int(math.ceil((x_max - x_min) / h)) + 1)
    if points > MAX_POINTS:
        points = MAX_POINTS
    return GridSettings(float(x_min), float(x_max), points)


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    a: float
    b: float
    abs_diff: float
    rel_diff: float


@dataclass(frozen=True)
class SpectrumComparison:
    rows: List[ComparisonRow]
    floor_scale: float

    @property
    def max_abs(self) -> float:
        return max((r.abs_diff for r in self.rows), default=0.0)

    @property
    def max_rel(self) -> float:
        return max((r.rel_diff for r in self.rows), default=0.0)


def compare_spectra(levels_a: Sequence[SpectrumLevel], levels_b: Sequence[SpectrumLevel],
                    floor_scale: float = 1e-3) -> SpectrumComparison:
    """Per-level differences of two spectra over the same n range.

    Relative differences divide by max(|E_b|, floor_scale), with B the
    reference, so levels at E = 0 do not blow up.
    """
    na = [lv.n for lv in levels_a]
    nb = [lv.n for lv in levels_b]
    if na != nb:
        raise ShapeError(f"level ranges differ: {na} vs {nb}")
    rows = []
    for la, lb in zip(levels_a, levels_b):
        diff = abs(la.energy - lb.energy)
        rows.append(ComparisonRow(la.n, la.energy, lb.energy, diff,
                                  diff / max(abs(lb.energy), floor_scale)))
    return SpectrumComparison(rows, floor_scale)
