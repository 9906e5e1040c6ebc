"""Perturbative Bohr-Sommerfeld series about the bottom of a well.

Near its minimum a well is written as

    V = Vmin + 1/2 m w^2 u^2 + alpha/3 u^3 + beta/4 u^4 + gamma/6 u^6,  u = x - x0

and the action and energy are expanded in the couplings.  Two truncations are
supported: ``cubicQuartic`` (through alpha^2 and beta) and ``symmetricSextic``
(reflection-symmetric wells, through beta^2 and gamma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import InvalidEnergyError, NoWellError, VariantMismatchError
from .potentials import Constants, Potential

CUBIC_QUARTIC = "cubicQuartic"
SYMMETRIC_SEXTIC = "symmetricSextic"
VARIANTS = (CUBIC_QUARTIC, SYMMETRIC_SEXTIC)


@dataclass(frozen=True)
class WellExpansion:
    x0: float
    Vmin: float
    omega: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: Optional[float] = None
    constants: Constants = Constants()

    def __post_init__(self):
        if not self.omega > 0:
            raise NoWellError("expansion needs omega > 0")

    @property
    def stiffness(self) -> float:
        """m w^2."""
        return self.constants.mass * self.omega**2

    def potential(self, u):
        """Truncated polynomial about the minimum, in the displacement u."""
        g = self.gamma or 0.0
        return (0.5 * self.stiffness * u**2 + self.alpha / 3.0 * u**3
                + self.beta / 4.0 * u**4 + g / 6.0 * u**6)


@dataclass(frozen=True)
class TurningPointSeries:
    """Signed contributions to one turning point (already multiplied by their couplings)."""

    side: str
    a0: float
    a1: float = 0.0   # alpha
    a2: float = 0.0   # alpha^2
    a1p: float = 0.0  # beta
    a2p: float = 0.0  # beta^2
    a3: float = 0.0   # gamma

    @property
    def value(self) -> float:
        return self.a0 + self.a1 + self.a2 + self.a1p + self.a2p + self.a3


def expand_well(spec: Potential, order: int = 4) -> WellExpansion:
    """Harmonic frequency and anharmonic couplings of ``spec`` at its minimum."""
    if order not in (4, 6):
        raise ValueError("order must be 4 or 6")
    x0, vmin = spec.minimum()
    d = spec.derivatives(order)
    if not d[2] > 0:
        raise NoWellError("curvature at the minimum is not positive")
    omega = math.sqrt(d[2] / spec.constants.mass)
    return WellExpansion(
        x0=x0,
        Vmin=vmin,
        omega=omega,
        alpha=d[3] / 2.0,
        beta=d[4] / 6.0,
        gamma=d[6] / 120.0 if order == 6 else None,
        constants=spec.constants,
    )


def turning_points_series(w: WellExpansion, E: float) -> Tuple[TurningPointSeries, TurningPointSeries]:
    """Perturbative turning points at oscillator energy ``E`` above the minimum.

    Returns (left, right) in the displacement from x0.
    """
    if not E > 0:
        raise InvalidEnergyError("energy above the minimum must be positive")
    k = w.stiffness
    g = w.gamma or 0.0
    out = []
    for side, sign in (("left", -1.0), ("right", 1.0)):
        a0 = sign * math.sqrt(2.0 * E / k)
        out.append(TurningPointSeries(
            side=side,
            a0=a0,
            a1=-w.alpha * a0**2 / (3.0 * k),
            a2=w.alpha**2 * 5.0 / 18.0 * (a0**2 / k) ** 2 / a0,
            a1p=-w.beta * a0**3 / (4.0 * k),
            a2p=w.beta**2 * 7.0 / 32.0 * a0**5 / k**2,
            a3=-g * a0**5 / (6.0 * k),
        ))
    return out[0], out[1]


def action_series(w: WellExpansion, E: float, variant: str = CUBIC_QUARTIC) -> float:
    """Truncated action J(E), E measured from the bottom of the well."""
    m, om = w.constants.mass, w.omega
    if variant == CUBIC_QUARTIC:
        return (2.0 * math.pi * E / om
                + 5.0 * math.pi * w.alpha**2 / (6.0 * m**3 * om**7) * E**2
                - 3.0 * math.pi * w.beta / (4.0 * m**2 * om**5) * E**2)
    _require_symmetric(w, variant)
    k = w.stiffness
    g = w.gamma or 0.0
    return 2.0 * math.pi / om * (
        E
        - 3.0 * w.beta / (8.0 * k**2) * E**2
        + 35.0 / 64.0 * w.beta**2 * E**3 / k**4
        - 5.0 / 12.0 * g * E**3 / k**3
    )


def oscillator_energy(w: WellExpansion, n, variant: str = CUBIC_QUARTIC, maslov: bool = True) -> float:
    """Energy above the minimum for level ``n``.

    ``maslov=False`` uses n in place of n + 1/2, the bare quantization rule.
    """
    nu = n + 0.5 if maslov else n
    m, om, hbar = w.constants.mass, w.omega, w.constants.hbar
    e0 = nu * hbar * om
    if variant == CUBIC_QUARTIC:
        # no term linear in alpha survives: the action is even in alpha
        return e0 + quadratic_coefficient(w) * nu**2
    _require_symmetric(w, variant)
    k = w.stiffness
    g = w.gamma or 0.0
    return (e0 + 3.0 / 8.0 * w.beta * e0**2 / k**2
            - 17.0 / 64.0 * w.beta**2 * e0**3 / k**4
            + 5.0 / 12.0 * g * e0**3 / k**3)


def perturbative_energy(w: WellExpansion, n, variant: str = CUBIC_QUARTIC, maslov: bool = True) -> float:
    """Total energy Vmin + E' of level ``n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return w.Vmin + oscillator_energy(w, n, variant, maslov)


def quadratic_coefficient(w: WellExpansion) -> float:
    """Coefficient of (n + 1/2)^2 in the cubicQuartic energy.

    Equal to hbar^2 [3/8 beta/(m^2 w^2) - 5/12 alpha^2/(m^3 w^4)]; negative
    when the cubic anharmonicity dominates.
    """
    m, om, hbar = w.constants.mass, w.omega, w.constants.hbar
    return hbar**2 * (3.0 / 8.0 * w.beta / (m**2 * om**2)
                      - 5.0 / 12.0 * w.alpha**2 / (m**3 * om**4))


def reduced_quadratic_coefficient(w: WellExpansion, energy_unit: float,
                                  expansion_unit: Optional[float] = None) -> float:
    """Quadratic coefficient c in  E/energy_unit = ... + c [(n + 1/2) hbar w / expansion_unit]^2.

    For the Lennard-Jones family, energy_unit = V0/4 and expansion_unit = V0
    give the coefficient of the 4E/V0 series.
    """
    expansion_unit = energy_unit if expansion_unit is None else expansion_unit
    hw = w.constants.hbar * w.omega
    return quadratic_coefficient(w) * expansion_unit**2 / (energy_unit * hw**2)


def _require_symmetric(w, variant):
    if variant != SYMMETRIC_SEXTIC:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    # finite-difference expansions leave roundoff in alpha
    if abs(w.alpha) * _length(w) > 1e-8 * w.stiffness:
        raise VariantMismatchError("symmetricSextic needs a reflection-symmetric well (alpha = 0)")
    if w.gamma is None:
        raise VariantMismatchError("symmetricSextic needs an order-6 expansion")


def _length(w):
    return math.sqrt(w.constants.hbar / (w.constants.mass * w.omega))
