"""Radial part of the equilibrium measure.

For a radial potential the limiting density of the gas, in polar
coordinates, is (2 pi beta)^-1 (r V'(r))' on the annulus r0 <= r <= R0, so
the modulus of a typical particle has density (r V'(r))' / beta and CDF
(r V'(r) - r0 V'(r0)) / beta there.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NoSolution, NumericError
from .numerics import find_root_bracketed
from .potential import SEARCH_LIMIT

_SCAN_POINTS = 4000


@dataclass(frozen=True)
class EquilibriumProfile:
    potential: object
    beta: float
    r0: float
    R0: float

    def density(self, r):
        return radial_density(self, r)

    def cdf(self, r):
        return radial_cdf(self, r)


def _scan(p, upper=SEARCH_LIMIT):
    lo = max(p.domain_min, 1e-9)
    return np.geomspace(lo, upper, _SCAN_POINTS)


def inner_radius(p):
    """r0 = inf{r : V' > 0 on (r, inf)}: the largest sign change of V'."""
    grid = _scan(p)
    v1 = p._d1(grid)
    bad = np.flatnonzero(v1 <= 0)
    if bad.size == 0:
        return float(p.domain_min)
    i = bad[-1]
    if i + 1 >= grid.size:
        raise NoSolution("V' is not eventually positive")
    if v1[i] == 0:
        return float(grid[i])
    f = lambda t: float(p._d1(np.asarray(t)))
    return find_root_bracketed(f, grid[i], grid[i + 1])


def support_radii(p, beta=2.0):
    """Return ``(r0, R0)``; R0 is the smallest r > r0 with r V'(r) = beta."""
    r0 = inner_radius(p)
    grid = _scan(p)
    grid = np.concatenate([[r0], grid[grid > r0]])
    g = p._rdv(grid) - beta
    above = np.flatnonzero(g >= 0)
    if above.size == 0:
        raise NoSolution(f"r V'(r) never reaches beta = {beta:g} on ({r0:g}, {SEARCH_LIMIT:g})")
    j = above[0]
    if g[j] == 0:
        return r0, float(grid[j])
    if j == 0:
        raise NoSolution(f"r V'(r) already exceeds beta = {beta:g} at r0 = {r0:g}")
    f = lambda t: float(p._rdv(np.asarray(t))) - beta
    R0 = find_root_bracketed(f, grid[j - 1], grid[j], tol=1e-14)
    if abs(f(R0)) > 1e-10:
        raise NoSolution(f"R0 residual {f(R0):.3g} above 1e-10")
    return r0, R0


def equilibrium_profile(p, beta=2.0):
    try:
        r0, R0 = support_radii(p, beta)
    except NumericError as exc:
        raise NoSolution(f"{p}: {exc}") from exc
    return EquilibriumProfile(p, float(beta), r0, R0)


def radial_density(profile, r):
    p = profile.potential
    r = np.asarray(r, dtype=float)
    inside = (r >= profile.r0) & (r <= profile.R0)
    safe = np.where(inside, r, profile.R0)
    rho = (safe * p._d2(safe) + p._d1(safe)) / profile.beta
    return np.where(inside, rho, 0.0)[()]


def radial_cdf(profile, r):
    p = profile.potential
    r = np.asarray(r, dtype=float)
    base = float(p._rdv(np.asarray(profile.r0)))
    safe = np.clip(r, profile.r0, profile.R0)
    cdf = np.clip((p._rdv(safe) - base) / profile.beta, 0.0, 1.0)
    cdf = np.where(r >= profile.R0, 1.0, cdf)
    return np.where(r <= profile.r0, 0.0, cdf)[()]
