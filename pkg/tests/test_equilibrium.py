import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coulomb_edge.equilibrium import equilibrium_profile, inner_radius, support_radii
from coulomb_edge.errors import NoSolution
from coulomb_edge.numerics import integrate_adaptive
from coulomb_edge.potential import Custom, LogConfining, Power, Quartic


@pytest.mark.parametrize(
    "p, R0",
    [(Power(2), 1.0), (Power(4), 0.8408964153), (Quartic(), 1.0), (LogConfining(2), 1.0)],
    ids=str,
)
def test_support(p, R0):
    r0, R = support_radii(p, 2.0)
    assert r0 == 0.0
    assert R == pytest.approx(R0, abs=1e-10)


def test_ginibre_profile_is_uniform_disc():
    prof = equilibrium_profile(Power(2))
    r = np.linspace(0, 1, 11)
    np.testing.assert_allclose(prof.cdf(r), r**2, atol=1e-14)
    inner = r[:-1]
    np.testing.assert_allclose(prof.density(inner), 2 * inner, atol=1e-14)


@pytest.mark.parametrize("p", [Power(2), Power(3.5), Quartic(), LogConfining(2.5)], ids=str)
def test_density_integrates_to_cdf(p):
    prof = equilibrium_profile(p)
    assert prof.cdf(prof.R0) == 1.0
    res = integrate_adaptive(lambda r: prof.density(r), prof.r0, prof.R0, tol=1e-12)
    assert res.value == pytest.approx(1.0, abs=1e-10)


def test_annulus_inner_radius():
    # V = r^4/4 - r^2/2 has V' = r^3 - r, negative on (0, 1)
    p = Custom(((0.25, 4.0), (-0.5, 2.0)), 0.0)
    assert inner_radius(p) == pytest.approx(1.0, abs=1e-12)
    r0, R0 = support_radii(p)
    # R^4 - R^2 = 2 at R^2 = 2
    assert (r0, R0) == pytest.approx((1.0, np.sqrt(2.0)), abs=1e-10)
    prof = equilibrium_profile(p)
    assert prof.cdf(0.5) == 0.0
    assert prof.cdf(1.2) == pytest.approx((1.2**4 - 1.2**2) / 2, rel=1e-12)


def test_no_support_for_weak_confinement():
    with pytest.raises(NoSolution):
        equilibrium_profile(LogConfining(1.0001), beta=2.5)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.0, 6.0), st.floats(0.0, 1.5), st.floats(0.0, 1.5))
def test_cdf_monotone(alpha, a, b):
    prof = equilibrium_profile(Power(alpha))
    lo, hi = sorted((a, b))
    assert 0.0 <= prof.cdf(lo) <= prof.cdf(hi) <= 1.0
