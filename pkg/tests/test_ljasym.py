import math

import numpy as np
import pytest
from scipy.integrate import quad

from bsq.action import action_integral, quantize, threshold_action
from bsq.errors import MarginalCaseError, NotApplicableError, UnboundLevelError
from bsq.ljasym import (
    PUBLISHED_FIT,
    SUBCRITICAL,
    SUPERCRITICAL,
    TABLE2_FIT,
    FitCoefficients,
    LJAsymptotics,
    epsilon_exponent,
    fit_coefficients,
    fitted_energy,
    lj_quadratic_coefficient,
    n0_plus_half,
    reduced_threshold_action,
    small_e_action,
    subcritical_energy,
)
from bsq.potentials import LJFamily
from bsq.wellseries import expand_well, quadratic_coefficient, reduced_quadratic_coefficient


def test_exponents():
    assert epsilon_exponent(1) == -0.5
    assert epsilon_exponent(6) == pytest.approx(1 / 3, abs=1e-15)
    assert small_e_action(1, 1e-4).exponent == -0.5
    assert small_e_action(6, 1e-4).exponent == pytest.approx(1 / 3)


def test_small_e_branches():
    sub = small_e_action(1, 1e-4)
    assert sub.divergent
    assert sub.value == pytest.approx(small_e_action(1, 1e-2).value * 10, rel=1e-12)
    sup = small_e_action(6, 1e-4)
    assert not sup.divergent and sup.value == reduced_threshold_action(6)
    with pytest.raises(MarginalCaseError):
        small_e_action(2, 1e-3)
    with pytest.raises(ValueError):
        small_e_action(0.5, 1e-3)


def test_subcritical_leading_term_k1():
    # relative correction to the divergent term is O(sqrt(eps)), about 2e-3 here
    lj = LJFamily(V0=1.0, a=1.0, k=1)
    eps = 1e-6
    J = action_integral(lj, -eps).action
    unit = math.sqrt(2 * lj.constants.mass * lj.V0) * lj.a / lj.k
    assert J / unit == pytest.approx(small_e_action(1, eps).value, rel=3e-3)


def test_reduced_threshold_integral():
    # 2 * int_0^1 sqrt(y(1-y)) y^(-7/6) dy, integrable y^(-2/3) endpoint
    val, _ = quad(lambda y: math.sqrt(1 - y), 0, 1, weight="alg", wvar=(-2 / 3, 0), epsrel=1e-13)
    assert reduced_threshold_action(6) == pytest.approx(2 * val, rel=1e-11)
    with pytest.raises(NotApplicableError):
        reduced_threshold_action(2)


def test_n0_examples():
    n = n0_plus_half(6, 0.03)
    assert n == pytest.approx(23.8, abs=0.1)
    assert n == pytest.approx(23.86, abs=0.005)
    assert n0_plus_half(6, 0.06) == pytest.approx(n / 2, rel=1e-15)
    with pytest.raises(NotApplicableError):
        n0_plus_half(2, 0.03)


def test_n0_matches_threshold_action():
    lj = LJFamily.from_hw_over_v0(6, 0.03)
    J0 = threshold_action(lj)
    assert n0_plus_half(6, 0.03) == pytest.approx(J0 / lj.constants.h, rel=1e-3)


def test_asymptotics_record():
    sup = LJAsymptotics.build(6, 0.03)
    assert sup.branch == SUPERCRITICAL and math.isfinite(sup.J0)
    assert sup.J0 == pytest.approx(2 * math.pi * sup.n0PlusHalf)
    assert sup.epsilonExponent == 0.5 - 1 / 6
    sub = LJAsymptotics.build(1, 0.1)
    assert sub.branch == SUBCRITICAL and math.isinf(sub.J0)
    assert sup.fit() == fit_coefficients(6, 0.03)


def test_exponent_recovery():
    lj = LJFamily.from_hw_over_v0(6, 0.03)
    J0 = threshold_action(lj)
    eps = np.logspace(-6, -3, 13)
    gap = [J0 - action_integral(lj, -e * lj.V0).action for e in eps]
    slope = np.polyfit(np.log(eps), np.log(gap), 1)[0]
    assert slope == pytest.approx(1 / 3, abs=0.05)


# --- subcritical closed form --------------------------------------------

def test_subcritical_k1_example():
    assert subcritical_energy(1, 0, 0.1) == pytest.approx(-1 / 1.1**2, rel=1e-14)
    assert subcritical_energy(1, 0, 0.1) == pytest.approx(-0.82645, abs=1e-5)


def test_subcritical_monotone_to_zero():
    vals = [subcritical_energy(1, n, 0.1) for n in range(0, 2000, 50)]
    assert np.all(np.diff(vals) > 0) and vals[-1] < 0 and vals[-1] > -1e-3


def test_subcritical_small_x_expansion():
    # -1 + 4 nu x + c nu^2 x^2 with c the k=1 quadratic coefficient
    nu, x = 0.5, 1e-4
    lead = -1 + 4 * nu * x
    second = (subcritical_energy(1, 0, x) - lead) / (nu * x) ** 2
    assert second == pytest.approx(lj_quadratic_coefficient(1), rel=1e-3)
    assert lj_quadratic_coefficient(1) == -12.0


def test_subcritical_matches_quantizer_k1():
    lj = LJFamily.from_hw_over_v0(1, 0.1)
    for n in range(11):
        E = 4 * quantize(lj, n).energy / lj.V0
        assert E == pytest.approx(subcritical_energy(1, n, 0.1), rel=1e-10)


def test_subcritical_errors():
    with pytest.raises(NotApplicableError):
        subcritical_energy(2, 0, 0.1)


# --- quadratic coefficient cross-module ---------------------------------

@pytest.mark.parametrize("k", [1, 4, 6, 12])
def test_lj_quadratic_coefficient_from_series(k):
    lj = LJFamily.from_hw_over_v0(k, 0.03)
    w = expand_well(lj)
    c = reduced_quadratic_coefficient(w, energy_unit=lj.V0 / 4, expansion_unit=lj.V0)
    assert c == pytest.approx(lj_quadratic_coefficient(k), rel=1e-6)


# --- fit ----------------------------------------------------------------

def test_fit_regression():
    fit = fit_coefficients(6, 0.03)
    assert fit.alpha == pytest.approx(-0.0057440, rel=1e-4)
    assert fit.beta == pytest.approx(3.1239e-5, rel=1e-4)


def _expansion(fit, N, nu):
    return -((1 - nu / N) ** 3) / fit.denominator(nu)


def _taylor(fit, N):
    # first and second derivative in nu at 0 by sampled polynomial fit
    nus = np.linspace(-0.05, 0.05, 21)
    p = np.polyfit(nus, [_expansion(fit, N, v) for v in nus], 6)
    return p[-2], p[-3]


def test_fit_reproduces_first_order():
    N = n0_plus_half(6, 0.03)
    first, _ = _taylor(fit_coefficients(6, 0.03), N)
    assert first == pytest.approx(4 * 0.03, rel=1e-8)
    # the published alpha is 4x - 3/23.8 rounded to three figures
    pfirst, _ = _taylor(FitCoefficients(*PUBLISHED_FIT), 23.8)
    assert pfirst == pytest.approx(4 * 0.03, rel=1e-4)


def test_fit_reproduces_second_order():
    target = -91 / 18 * 0.03**2
    N = n0_plus_half(6, 0.03)
    _, second = _taylor(fit_coefficients(6, 0.03), N)
    assert second == pytest.approx(target, rel=1e-6)
    _, psecond = _taylor(FitCoefficients(*PUBLISHED_FIT), 23.8)
    assert psecond == pytest.approx(target, rel=0.02)


def test_fitted_energy_examples():
    N = n0_plus_half(6, 0.03)
    fit = fit_coefficients(6, 0.03)
    assert fitted_energy(0, N, fit) == pytest.approx(-0.94113, abs=1e-5)
    assert abs(fitted_energy(23, N, fit)) < 5e-6
    with pytest.raises(UnboundLevelError):
        fitted_energy(24, N, fit)


def test_published_fit_reproduces_printed_column():
    fit = FitCoefficients(*PUBLISHED_FIT)
    ours = [fitted_energy(n, 23.8, fit) for n in range(24)]
    np.testing.assert_allclose(ours, TABLE2_FIT, atol=6e-5)
    assert fitted_energy(10, 23.8, fit) == pytest.approx(-0.18576, abs=1e-5)


def test_cubic_vanishing():
    N = n0_plus_half(6, 0.03)
    fit = fit_coefficients(6, 0.03)
    ratios = [fitted_energy(N - 0.5 - d, N, fit) / (d / N) ** 3 for d in (1e-1, 1e-2, 1e-3)]
    assert ratios[-1] == pytest.approx(-1 / fit.denominator(N), rel=1e-3)
    assert ratios[-1] != 0


def test_quadratic_coefficient_sign_agrees_with_series():
    w = expand_well(LJFamily.from_hw_over_v0(6, 0.03))
    assert quadratic_coefficient(w) < 0
