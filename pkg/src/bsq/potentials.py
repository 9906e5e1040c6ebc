"""Catalog of one-dimensional wells.

Every potential is an immutable dataclass that knows how to evaluate itself,
locate its minimum, report its dissociation threshold and, for the solvable
families, return a closed-form spectrum.  Energies carry the units of the
parameters; hbar and mass live in :class:`Constants` and default to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import expression as _expr
from .errors import (
    DomainError,
    NoWellError,
    NotAvailableError,
    UnboundLevelError,
)

_EPS = np.finfo(float).eps
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Constants:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be positive")

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar


def _positive(**params):
    for name, value in params.items():
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class Potential:
    """Base class; subclasses implement ``_eval`` and the closed forms they have."""

    constants: Constants = field(default_factory=Constants, kw_only=True)

    kind = "potential"
    #: lower/upper edge of the open domain of definition
    domain = (-math.inf, math.inf)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.domain
        if np.any(x <= lo) or np.any(x >= hi):
            raise DomainError(f"{self.kind}: x outside ({lo}, {hi})")
        v = self._eval(x)
        return v if np.ndim(v) else float(v)

    def _eval(self, x):
        raise NotImplementedError

    def minimum(self) -> Tuple[float, float]:
        raise NotImplementedError

    def derivatives(self, order: int = 6) -> list:
        """[V(x0), V'(x0), ..., V^(order)(x0)] at the well minimum."""
        raise NotImplementedError

    def dissociation(self) -> float:
        return math.inf

    def exact_energy(self, n: int) -> float:
        raise NotAvailableError(f"no closed-form spectrum for {self.kind}")

    def semiclassical_energy(self, n: int) -> float:
        """Closed-form Bohr-Sommerfeld spectrum where one is known."""
        return self.exact_energy(n)

    @property
    def length_scale(self) -> float:
        return 1.0

    @property
    def energy_scale(self) -> float:
        """Energy unit used for reported ``energy_over_scale`` columns."""
        return 1.0

    @property
    def symmetric(self) -> bool:
        return False


@dataclass(frozen=True)
class Harmonic(Potential):
    omega: float = 1.0
    center: float = 0.0
    kind = "harmonic"

    def __post_init__(self):
        _positive(omega=self.omega)

    def _eval(self, x):
        return 0.5 * self.constants.mass * self.omega**2 * (x - self.center) ** 2

    def minimum(self):
        return self.center, 0.0

    def derivatives(self, order=6):
        d = [0.0] * (order + 1)
        d[2] = self.constants.mass * self.omega**2
        return d

    def exact_energy(self, n):
        _check_n(n)
        return (n + 0.5) * self.constants.hbar * self.omega

    @property
    def length_scale(self):
        c = self.constants
        return math.sqrt(c.hbar / (c.mass * self.omega))

    @property
    def energy_scale(self):
        return self.constants.hbar * self.omega

    @property
    def symmetric(self):
        return True


@dataclass(frozen=True)
class PoschlTeller(Potential):
    """V(x) = -V0 sech^2(a x)."""

    V0: float = 1.0
    a: float = 1.0
    kind = "poschl_teller"

    def __post_init__(self):
        _positive(V0=self.V0, a=self.a)

    def _eval(self, x):
        return -self.V0 / np.cosh(self.a * x) ** 2

    def minimum(self):
        return 0.0, -self.V0

    def derivatives(self, order=6):
        # sech^2 u = 1 - u^2 + 2/3 u^4 - 17/45 u^6 + ...
        coef = [-1.0, 0.0, 1.0, 0.0, -2.0 / 3.0, 0.0, 17.0 / 45.0]
        return [self.V0 * c * math.factorial(d) * self.a**d for d, c in enumerate(coef[: order + 1])]

    def dissociation(self):
        return 0.0

    @property
    def strength(self) -> float:
        """Dimensionless 8 m V0 / (a hbar)^2."""
        c = self.constants
        return 8.0 * c.mass * self.V0 / (self.a * c.hbar) ** 2

    def exact_energy(self, n):
        """Fully quantum spectrum, -(a hbar)^2/8m [2n+1 - sqrt(1 + 8mV0/(a hbar)^2)]^2."""
        _check_n(n)
        root = math.sqrt(1.0 + self.strength)
        if 2 * n + 1 >= root:
            raise UnboundLevelError(f"n={n} is not bound")
        c = self.constants
        return -((self.a * c.hbar) ** 2) / (8.0 * c.mass) * (2 * n + 1 - root) ** 2

    def semiclassical_energy(self, n):
        _check_n(n)
        root = math.sqrt(self.strength)
        if 2 * n + 1 >= root:
            raise UnboundLevelError(f"n={n} is not bound")
        c = self.constants
        return -((self.a * c.hbar) ** 2) / (8.0 * c.mass) * (2 * n + 1 - root) ** 2

    @property
    def length_scale(self):
        return 1.0 / self.a

    @property
    def energy_scale(self):
        return self.V0

    @property
    def symmetric(self):
        return True


@dataclass(frozen=True)
class PoschlTellerTrig(Potential):
    """V(x) = V0 sec^2(a x) on |x| < pi/(2a)."""

    V0: float = 1.0
    a: float = 1.0
    kind = "poschl_teller_trig"

    def __post_init__(self):
        _positive(V0=self.V0, a=self.a)
        wall = math.pi / (2.0 * self.a)
        object.__setattr__(self, "domain", (-wall, wall))

    def _eval(self, x):
        return self.V0 / np.cos(self.a * x) ** 2

    def minimum(self):
        return 0.0, self.V0

    def derivatives(self, order=6):
        coef = [1.0, 0.0, 1.0, 0.0, 2.0 / 3.0, 0.0, 17.0 / 45.0]
        return [self.V0 * c * math.factorial(d) * self.a**d for d, c in enumerate(coef[: order + 1])]

    def exact_energy(self, n):
        """Perfect-square spectrum (sqrt(V0) + (n+1/2) hbar omega / 2 sqrt(V0))^2."""
        _check_n(n)
        c = self.constants
        hw = c.hbar * self.a * math.sqrt(2.0 * self.V0 / c.mass)
        return (math.sqrt(self.V0) + (n + 0.5) * hw / (2.0 * math.sqrt(self.V0))) ** 2

    def quantum_energy(self, n):
        """Schrodinger eigenvalue (hbar a)^2/2m (n + lam)^2, lam(lam-1) = 2 m V0/(hbar a)^2."""
        _check_n(n)
        c = self.constants
        unit = (c.hbar * self.a) ** 2 / (2.0 * c.mass)
        lam = 0.5 + math.sqrt(0.25 + self.V0 / unit)
        return unit * (n + lam) ** 2

    @property
    def length_scale(self):
        return 1.0 / self.a

    @property
    def energy_scale(self):
        return self.V0

    @property
    def symmetric(self):
        return True


@dataclass(frozen=True)
class Morse(Potential):
    """V(x) = V0 (exp(-2ax) - 2 exp(-ax))."""

    V0: float = 1.0
    a: float = 1.0
    kind = "morse"

    def __post_init__(self):
        _positive(V0=self.V0, a=self.a)

    def _eval(self, x):
        e = np.exp(-self.a * x)
        return self.V0 * (e * e - 2.0 * e)

    def minimum(self):
        return 0.0, -self.V0

    def derivatives(self, order=6):
        return [self.V0 * self.a**d * ((-2.0) ** d - 2.0 * (-1.0) ** d) for d in range(order + 1)]

    def dissociation(self):
        return 0.0

    def exact_energy(self, n):
        _check_n(n)
        c = self.constants
        root = math.sqrt(self.V0) - (n + 0.5) * c.hbar * self.a / math.sqrt(2.0 * c.mass)
        if root <= 0:
            raise UnboundLevelError(f"n={n} is not bound")
        return -root * root

    @property
    def length_scale(self):
        return 1.0 / self.a

    @property
    def energy_scale(self):
        return self.V0


@dataclass(frozen=True)
class RosenMorse(Potential):
    """V(x) = A^2 + B^2/A^2 + 2B tanh(ax) - A*At sech^2(ax), At = A + a hbar/sqrt(2m)."""

    A: float = 1.0
    B: float = 0.0
    a: float = 1.0
    kind = "rosen_morse"

    def __post_init__(self):
        _positive(A=self.A, a=self.a)
        if abs(self.B) >= self.A * self.A_tilde:
            raise NoWellError("Rosen-Morse well needs |B| < A*At")

    @property
    def A_tilde(self) -> float:
        c = self.constants
        return self.A + self.a * c.hbar / math.sqrt(2.0 * c.mass)

    @property
    def _step(self) -> float:
        c = self.constants
        return c.hbar * self.a / math.sqrt(2.0 * c.mass)

    def _eval(self, x):
        t = np.tanh(self.a * x)
        return (
            self.A**2
            + self.B**2 / self.A**2
            + 2.0 * self.B * t
            - self.A * self.A_tilde * (1.0 - t * t)
        )

    def minimum(self):
        P = self.A * self.A_tilde
        x0 = math.atanh(-self.B / P) / self.a
        vmin = self.A**2 + self.B**2 / self.A**2 - P - self.B**2 / P
        return x0, vmin

    def derivatives(self, order=6):
        P = self.A * self.A_tilde
        B, a = self.B, self.a
        t = -B / P
        s2 = 1.0 - t * t
        x0, vmin = self.minimum()
        d = [vmin, 0.0, 2 * a**2 * P * s2 * s2, 12 * a**3 * B * s2 * s2,
             8 * a**4 * P * s2 * s2 * (9 * t * t - 2)]
        # general tanh-chain derivatives, written as polynomials in t
        d.append(16 * a**5 * s2 * (45*P*t**5 - 60*P*t**3 + 17*P*t + 15*B*t**4 - 15*B*t**2 + 2*B))
        d.append(-16 * a**6 * s2 * (315*P*t**6 - 525*P*t**4 + 231*P*t**2 - 17*P
                                    + 90*B*t**5 - 120*B*t**3 + 34*B*t))
        return d[: order + 1]

    def dissociation(self):
        # lower of the two asymptotes; above it the orbit escapes to that side
        return self.A**2 + self.B**2 / self.A**2 - 2.0 * abs(self.B)

    def asymptotes(self) -> Tuple[float, float]:
        base = self.A**2 + self.B**2 / self.A**2
        return base - 2.0 * self.B, base + 2.0 * self.B

    def exact_energy(self, n):
        """Level formula A^2 - X^2 + B^2 (1/A^2 - 1/X^2), X = A - (n+1/2) a hbar/sqrt(2m)."""
        return self.level_energy(n)

    def level_energy(self, n, exact_atilde=False):
        """Closed-form levels.

        With ``exact_atilde`` the centre of X is the midpoint (A + At)/2
        instead of A, which keeps the A/At distinction in the level factor.
        """
        _check_n(n)
        centre = 0.5 * (self.A + self.A_tilde) if exact_atilde else self.A
        X = centre - (n + 0.5) * self._step
        if X <= math.sqrt(abs(self.B)):
            raise UnboundLevelError(f"n={n} is not bound")
        return self.A**2 - X * X + self.B**2 * (1.0 / self.A**2 - 1.0 / (X * X))

    @property
    def length_scale(self):
        return 1.0 / self.a

    @property
    def energy_scale(self):
        return self.A**2

    @property
    def symmetric(self):
        return self.B == 0


@dataclass(frozen=True)
class LJFamily(Potential):
    """V(x) = V0 [(a/x)^(2k) - (a/x)^k] on x > 0."""

    V0: float = 1.0
    a: float = 1.0
    k: int = 6
    kind = "lj"
    domain = (0.0, math.inf)

    def __post_init__(self):
        _positive(V0=self.V0, a=self.a)
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("k must be an integer >= 1")

    @classmethod
    def from_hw_over_v0(cls, k: int, hw_over_V0: float, a: float = 1.0,
                        constants: Optional[Constants] = None) -> "LJFamily":
        """Choose V0 so that hbar*omega/V0 takes the requested value at fixed a, m, hbar."""
        c = constants or Constants()
        _positive(hw_over_V0=hw_over_V0)
        # hbar omega / V0 = hbar k 2^(-1/k) / (sqrt(2 m V0) a)
        sqrt_v0 = c.hbar * k * 2.0 ** (-1.0 / k) / (math.sqrt(2.0 * c.mass) * a * hw_over_V0)
        return cls(V0=sqrt_v0**2, a=a, k=k, constants=c)

    def _eval(self, x):
        y = (self.a / x) ** self.k
        return self.V0 * (y * y - y)

    def minimum(self):
        return self.a * 2.0 ** (1.0 / self.k), -0.25 * self.V0

    def derivatives(self, order=6):
        x0, vmin = self.minimum()
        k, a = self.k, self.a

        def power_deriv(p, d):
            # d^d/dx^d of (a/x)^p at x0
            f = (-1.0) ** d * math.prod(p + j for j in range(d))
            return f * a**p * x0 ** (-p - d)

        return [self.V0 * (power_deriv(2 * k, d) - power_deriv(k, d)) for d in range(order + 1)]

    def dissociation(self):
        return 0.0

    @property
    def omega(self) -> float:
        return self.k / math.sqrt(2.0) * 2.0 ** (-1.0 / self.k) * math.sqrt(
            self.V0 / (self.constants.mass * self.a**2)
        )

    @property
    def hw_over_V0(self) -> float:
        return self.constants.hbar * self.omega / self.V0

    def exact_energy(self, n):
        """Only k = 1 has a closed form: 4E/V0 = -1/[1 + (2n+1) hbar omega/V0]^2."""
        if self.k != 1:
            raise NotAvailableError("closed-form LJ spectrum exists only for k=1")
        _check_n(n)
        return -0.25 * self.V0 / (1.0 + (2 * n + 1) * self.hw_over_V0) ** 2

    @property
    def length_scale(self):
        return self.a

    @property
    def energy_scale(self):
        return 0.25 * self.V0


# ---------------------------------------------------------------------------
# user-defined wells


@dataclass(frozen=True)
class Polynomial(Potential):
    """V(x) = sum_i coeffs[i] (x - center)^i; derivatives are exact."""

    coeffs: Tuple[float, ...] = (0.0, 0.0, 0.5)
    center: float = 0.0
    search: Optional[Tuple[float, float]] = None
    kind = "polynomial"

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def _poly(self):
        return np.polynomial.Polynomial(self.coeffs)

    def _eval(self, x):
        return self._poly(x - self.center)

    def minimum(self):
        crit = self._poly.deriv().roots()
        crit = np.real(crit[np.abs(np.imag(crit)) < 1e-12])
        d2 = self._poly.deriv(2)
        minima = sorted(float(u) for u in crit if d2(u) > 0)
        if self.search is not None:
            lo, hi = self.search[0] - self.center, self.search[1] - self.center
            minima = [u for u in minima if lo < u < hi]
        if not minima:
            raise NoWellError("polynomial has no local minimum in the search interval")
        u = min(minima, key=lambda u: float(self._poly(u)))
        return u + self.center, float(self._poly(u))

    def derivatives(self, order=6):
        x0, _ = self.minimum()
        u = x0 - self.center
        p = self._poly
        return [float(p.deriv(d)(u)) if d else float(p(u)) for d in range(order + 1)]

    def dissociation(self):
        x0, _ = self.minimum()
        u0 = x0 - self.center
        p = self._poly
        crit = p.deriv().roots()
        crit = sorted(float(np.real(u)) for u in crit if abs(np.imag(u)) < 1e-12)
        d2 = p.deriv(2)
        maxima = [u for u in crit if d2(u) < 0]
        left = [u for u in maxima if u < u0]
        right = [u for u in maxima if u > u0]
        deg = len(self.coeffs) - 1
        lead = self.coeffs[-1]
        # sign of V at -inf / +inf
        up_right = lead > 0
        up_left = (lead > 0) == (deg % 2 == 0)
        sides = []
        sides.append(float(p(max(left))) if left else (math.inf if up_left else None))
        sides.append(float(p(min(right))) if right else (math.inf if up_right else None))
        if None in sides:
            raise NoWellError("polynomial well is not confined on one side")
        return min(sides)

    @property
    def symmetric(self):
        return all(c == 0.0 for c in self.coeffs[1::2])


@dataclass(frozen=True)
class Expression(Potential):
    """Potential given as text, e.g. ``"-1*sech(x)^2"``.

    ``search`` brackets the minimum.  ``dissociation_energy`` may be given;
    otherwise it is estimated by marching away from the minimum.
    Derivatives come from Richardson-extrapolated central differences.
    """

    text: str = "0.5*x^2"
    search: Tuple[float, float] = (-1.0, 1.0)
    scale: float = 1.0
    dissociation_energy: Optional[float] = None
    bounds: Tuple[float, float] = (-math.inf, math.inf)
    kind = "expression"

    def __post_init__(self):
        object.__setattr__(self, "_tree", _expr.parse_expression(self.text))
        object.__setattr__(self, "domain", tuple(map(float, self.bounds)))
        lo, hi = self.search
        if not lo < hi:
            raise ValueError("search interval must satisfy lo < hi")
        _positive(scale=self.scale)
        object.__setattr__(self, "_min", None)

    @property
    def tree(self):
        return self._tree

    def _eval(self, x):
        return _expr.evaluate(self._tree, x)

    def minimum(self):
        if self._min is None:
            object.__setattr__(self, "_min", find_minimum(self, self.search, self.scale))
        return self._min

    def derivatives(self, order=6):
        x0, vmin = self.minimum()
        return [vmin] + [central_derivative(self, x0, d, self.scale) for d in range(1, order + 1)]

    def dissociation(self):
        if self.dissociation_energy is not None:
            return float(self.dissociation_energy)
        return march_threshold(self)

    @property
    def length_scale(self):
        return self.scale


# ---------------------------------------------------------------------------
# numerical helpers for user-defined wells


def central_derivative(f, x0: float, order: int, scale: float = 1.0, levels: int = 3,
                       candidates: int = 6) -> float:
    """d-th derivative of ``f`` at ``x0`` by central differences plus Richardson.

    The smallest base step is eps^(1/(d+2)) * scale, the balance point of a
    plain central difference.  Once Richardson removes the h^2 and h^4 terms
    that step is roundoff-limited, so the tableau is repeated for base steps
    doubled up to ``candidates - 1`` times and the value whose neighbour agrees
    best is kept.  Steps that leave the domain are skipped.
    """
    binom = [math.comb(order, j) * (-1) ** j for j in range(order + 1)]
    offsets = np.array([order / 2.0 - j for j in range(order + 1)])

    def stencil(step):
        vals = f(x0 + offsets * step)
        return float(np.dot(binom, vals)) / step**order

    def tableau(h):
        # row i uses step h * 2^(levels-1-i) so the last row is finest
        table = [stencil(h * 2.0 ** (levels - 1 - i)) for i in range(levels)]
        for j in range(1, levels):
            factor = 4.0**j
            table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
        return table[0]

    h0 = scale * _EPS ** (1.0 / (order + 2))
    values = []
    for j in range(candidates):
        try:
            v = tableau(h0 * 2.0**j)
        except DomainError:
            break
        if not math.isfinite(v):
            break
        values.append(v)
    if not values:
        raise DomainError("no finite-difference stencil fits inside the domain")
    if len(values) == 1:
        return values[0]
    gaps = [abs(values[j + 1] - values[j]) for j in range(len(values) - 1)]
    return values[int(np.argmin(gaps))]


def find_minimum(f, interval, scale=1.0) -> Tuple[float, float]:
    """Golden-section search on ``interval`` followed by Newton polish on f'."""
    lo, hi = map(float, interval)
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > 1e-10 * max(scale, abs(lo) + abs(hi)):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    x0 = 0.5 * (lo + hi)
    a, b = map(float, interval)
    for _ in range(20):
        g1 = central_derivative(f, x0, 1, scale)
        g2 = central_derivative(f, x0, 2, scale)
        if not g2 > 0:
            raise NoWellError("no minimum with positive curvature in the search interval")
        step = g1 / g2
        x0 -= step
        if abs(step) <= 1e-15 * max(abs(x0), scale):
            break
    edge = 1e-6 * (b - a)
    if not (a + edge < x0 < b - edge):
        raise NoWellError("minimum lies on the edge of the search interval")
    return x0, float(f(x0))


def march_threshold(f, max_distance: float = 1e6) -> float:
    """Supremum of bound energies, found by walking outward on both sides.

    A side that keeps rising past 1e8 times the well depth is a wall
    (+inf); a side that turns over is a barrier; a side that flattens
    contributes its limiting value.
    """
    x0, vmin = f.minimum()
    scale = f.length_scale
    depth_ref = max(abs(vmin), 1.0)
    lo, hi = f.domain
    sides = []
    for sign in (-1.0, 1.0):
        step = 1e-3 * scale
        best = vmin
        value = vmin
        while step < max_distance * scale:
            x = x0 + sign * step
            if not (lo < x < hi):
                value = math.inf
                break
            try:
                v = float(f(x))
            except DomainError:
                value = math.inf
                break
            if v < best:
                value = best
                break
            best = v
            value = v
            if v - vmin > 1e8 * depth_ref:
                value = math.inf
                break
            step *= 1.1
        sides.append(value)
    return min(sides)


def _check_n(n):
    if int(n) != n or n < 0:
        raise ValueError("n must be a non-negative integer")


# ---------------------------------------------------------------------------
# module-level operations


def evaluate(spec: Potential, x):
    return spec(x)


def well_minimum(spec: Potential) -> Tuple[float, float]:
    return spec.minimum()


def exact_energy(spec: Potential, n: int) -> float:
    return spec.exact_energy(n)


def dissociation_energy(spec: Potential) -> float:
    """Supremum of bound energies; ``math.inf`` for confining wells."""
    return spec.dissociation()


CATALOG = {
    "harmonic": Harmonic,
    "poschl_teller": PoschlTeller,
    "poschl_teller_trig": PoschlTellerTrig,
    "morse": Morse,
    "rosen_morse": RosenMorse,
    "lj": LJFamily,
    "polynomial": Polynomial,
    "expression": Expression,
}


METHODS = ("perturbative", "numericBS", "asymptoticFit", "oracle", "exactClosedForm")


@dataclass(frozen=True)
class SpectrumLevel:
    n: int
    energy: float
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
