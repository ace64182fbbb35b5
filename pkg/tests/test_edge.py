import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coulomb_edge.edge import (
    Regime,
    c_n,
    closed_form_c0,
    curvature_at_edge,
    general_scaling,
    gumbel_cdf,
    gumbel_quantile,
    heavytail_limit_cdf,
    heavytail_quantile,
    minimal_admissible_n,
    power_scaling,
    scaling_for,
    standardize_max,
)
from coulomb_edge.errors import AssumptionViolated, DomainError, SubcriticalN
from coulomb_edge.potential import LogConfining, Power, Quartic


def _mp_constants(alpha, n):
    mpmath.mp.dps = 50
    a, n = mpmath.mpf(alpha), mpmath.mpf(n)
    cn = mpmath.log(n) - 2 * mpmath.log(mpmath.log(n)) - mpmath.log(2 * mpmath.pi)
    an = 2 * (a / 2) ** (1 / a + mpmath.mpf(1) / 2) * mpmath.sqrt(n * cn)
    bn = (2 / a) ** (1 / a) * (1 + mpmath.sqrt(2 / a * cn / n) / 2)
    return float(cn), float(an), float(bn)


@pytest.mark.parametrize("alpha, n", [(2, 1000), (1, 10**4), (3, 10**6), (2.5, 777)])
def test_power_constants_match_extended_precision(alpha, n):
    sc = power_scaling(alpha, n)
    cn, an, bn = _mp_constants(alpha, n)
    assert (sc.c_n, sc.a_n, sc.b_n) == pytest.approx((cn, an, bn), rel=1e-13)


def test_ginibre_constants_at_thousand():
    sc = power_scaling(2, 1000)
    # rounded reference values: a_n = 69.42, b_n = 1.01735
    assert sc.a_n == pytest.approx(69.42, abs=0.01)
    assert sc.b_n == pytest.approx(1.01735, abs=1e-5)
    assert sc.c_n == pytest.approx(1.2045887447, abs=1e-9)
    assert sc.t0 == 1.0
    assert sc.regime is Regime.POWER


def test_subcritical_n():
    with pytest.raises(SubcriticalN) as info:
        power_scaling(2, 100)
    assert info.value.c_n == pytest.approx(-0.287, abs=1e-3)
    assert info.value.minimal_n == minimal_admissible_n()


def test_minimal_admissible_n():
    n = minimal_admissible_n()
    assert c_n(n) > 0 >= c_n(n - 1)
    assert all(c_n(k) > 0 for k in range(n, 5000))


def test_c_n_growth():
    grid = np.arange(200, 20000)
    assert np.all(np.diff([c_n(k) for k in grid]) > 0)
    ratios = [c_n(10.0**e) / math.log(10.0**e) for e in (3, 6, 9)]
    assert ratios[0] < ratios[1] < ratios[2] < 1


@pytest.mark.parametrize("n", [10**3, 10**6])
def test_general_reduces_to_power_for_ginibre(n):
    g, p = general_scaling(Power(2), n), power_scaling(2, n)
    for name in ("t0", "C0", "a_n", "b_n"):
        assert getattr(g, name) == pytest.approx(getattr(p, name), rel=1e-10)


@pytest.mark.parametrize("p, expected", [(Power(2), 0.5), (Quartic(), 1 / math.sqrt(6**1.5 / 2))], ids=str)
def test_c0_two_routes(p, expected):
    numeric = general_scaling(p, 1000).C0
    assert closed_form_c0(p) == pytest.approx(expected, rel=1e-15)
    assert numeric == pytest.approx(closed_form_c0(p), rel=1e-10)


def test_quartic_curvature_at_edge():
    assert curvature_at_edge(Quartic(), 1.0) == -6.0


@pytest.mark.parametrize("alpha", [1.0, 1.5, 3.0, 5.0])
def test_power_c0_closed_form(alpha):
    t0 = (2 / alpha) ** (1 / alpha)
    assert power_scaling(alpha, 1000).C0 == pytest.approx(t0 / math.sqrt(2 * alpha), rel=1e-14)
    # curvature route: |F''(t0)| = 2 alpha / t0^2 for a power potential
    curv = abs(curvature_at_edge(Power(alpha), t0))
    assert curv == pytest.approx(2 * alpha / t0**2, rel=1e-13)
    assert closed_form_c0(Power(alpha)) == pytest.approx(1 / math.sqrt(curv**1.5 * t0 / 2), rel=1e-13)


def test_curvature_and_gamma_routes_meet_only_at_ginibre():
    for alpha in (1.5, 2.0, 3.0):
        same = closed_form_c0(Power(alpha)) == pytest.approx(power_scaling(alpha, 1000).C0, rel=1e-12)
        assert same is (alpha == 2.0)


@pytest.mark.parametrize("p", [Power(3), Power(1), LogConfining(1.5)], ids=str)
def test_general_refuses_without_convexity_floor(p):
    with pytest.raises(AssumptionViolated) as info:
        general_scaling(p, 1000)
    assert "A1" in info.value.failed


def test_scaling_dispatch():
    assert scaling_for(Power(3), 1000).regime is Regime.POWER
    assert scaling_for(Quartic(), 1000).regime is Regime.GENERAL


def test_gumbel_values():
    assert gumbel_cdf(0.0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert gumbel_quantile(0.5) == pytest.approx(-math.log(math.log(2)), abs=1e-15)
    assert gumbel_cdf(gumbel_quantile(0.9)) == pytest.approx(0.9, abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-6, 1 - 1e-6))
def test_quantile_round_trips(prob):
    assert gumbel_cdf(gumbel_quantile(prob)) == pytest.approx(prob, rel=1e-9)
    assert heavytail_limit_cdf(heavytail_quantile(prob)) == pytest.approx(prob, rel=1e-9)


def test_standardize():
    sc = power_scaling(2, 1000)
    assert standardize_max(sc.b_n, sc) == 0.0
    assert standardize_max(sc.b_n + 1 / sc.a_n, sc) == pytest.approx(1.0, rel=1e-12)


def test_heavytail_limit():
    assert heavytail_limit_cdf(math.sqrt(2)) == pytest.approx(math.exp(-1), rel=1e-14)
    values = heavytail_limit_cdf(np.linspace(1.01, 100, 500))
    assert np.all(np.diff(values) > 0) and values[-1] < 1
    with pytest.raises(DomainError):
        heavytail_limit_cdf(1.0)


def test_to_dict_keys():
    assert list(power_scaling(2, 1000).to_dict()) == ["regime", "n", "t0", "C0", "c_n", "a_n", "b_n"]
