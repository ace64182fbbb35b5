"""Edge scaling constants and limit laws for the largest modulus.

With c_n = log n - 2 log log n - log(2 pi), the rescaled maximum
a_n (|z|_(1) - b_n) is asymptotically standard Gumbel, both for power
potentials and for strictly convex potentials. A formal hard-wall model
gives Frechet-like behaviour instead.
"""

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import AssumptionViolated, DomainError, SubcriticalN
from .potential import Power, Quartic, solve_t_x, validate


class Regime(enum.Enum):
    POWER = "PowerCase"
    GENERAL = "GeneralCase"


@dataclass(frozen=True)
class ScalingConstants:
    regime: Regime
    n: int
    t0: float
    C0: float
    c_n: float
    a_n: float
    b_n: float

    def to_dict(self):
        d = asdict(self)
        d["regime"] = self.regime.value
        return d


def c_n(n):
    """log n - 2 log log n - log(2 pi) (NaN for n <= 1)."""
    n = float(n)
    if n <= 1.0:
        return math.nan
    return math.log(n) - 2.0 * math.log(math.log(n)) - math.log(2.0 * math.pi)


def minimal_admissible_n():
    """Smallest n >= 2 from which c_n stays positive."""
    # c_n decreases up to n = e^2 and increases afterwards; negative at e^2.
    n = 8
    while not c_n(n) > 0:
        n += 1
    return n


def _require_admissible(n):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    value = c_n(n)
    if not value > 0:
        raise SubcriticalN(int(n), value, minimal_admissible_n())
    return value


def power_scaling(alpha, n):
    """Constants for V(t) = t**alpha, obtained through the Gamma-sum representation."""
    if not alpha >= 1:
        raise DomainError(f"alpha must be >= 1, got {alpha}")
    cn = _require_admissible(n)
    t0 = (2.0 / alpha) ** (1.0 / alpha)
    a_n = 2.0 * (alpha / 2.0) ** (1.0 / alpha + 0.5) * math.sqrt(n * cn)
    b_n = t0 * (1.0 + 0.5 * math.sqrt(2.0 / alpha * cn / n))
    return ScalingConstants(Regime.POWER, int(n), t0, t0 / math.sqrt(2.0 * alpha), cn, a_n, b_n)


def curvature_at_edge(p, t0):
    """F''(t0) = -2 / t0**2 - V''(t0)."""
    return -2.0 / (t0 * t0) - float(p.d2(t0))


def general_scaling(p, n):
    """Constants for a potential satisfying A1 (V'' >= a > 0) and A2."""
    report = validate(p, 2.0)
    failed = [name for name, ok in (("A1", report.a1_ok), ("A2", report.a2_ok)) if not ok]
    if failed:
        raise AssumptionViolated(failed, f"{p}: " + "; ".join(report.messages))
    cn = _require_admissible(n)
    t0 = solve_t_x(p, 0.0)
    curv = abs(curvature_at_edge(p, t0))
    C0 = 1.0 / math.sqrt(curv**1.5 * t0 / 2.0)
    return ScalingConstants(
        Regime.GENERAL,
        int(n),
        t0,
        C0,
        cn,
        math.sqrt(n * cn) / C0,
        t0 + C0 * math.sqrt(cn / n),
    )


def closed_form_c0(p):
    """C0 from hand-derived formulas (no root finding), for cross-checks.

    Power(alpha): sqrt(2) t0 (2 alpha)**(-3/4) with t0 = (2/alpha)**(1/alpha);
    Quartic: t0 = 1, |F''(1)| = 6.
    """
    if isinstance(p, Power):
        t0 = (2.0 / p.alpha) ** (1.0 / p.alpha)
        return math.sqrt(2.0) * t0 * (2.0 * p.alpha) ** -0.75
    if isinstance(p, Quartic):
        return 1.0 / math.sqrt(6.0**1.5 / 2.0)
    raise DomainError(f"no closed form for C0 of {p}")


def scaling_for(p, n):
    """Power potentials use the power-case constants, others the general ones."""
    if isinstance(p, Power):
        return power_scaling(p.alpha, n)
    return general_scaling(p, n)


def gumbel_cdf(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return np.exp(-np.exp(-x))[()]


def gumbel_quantile(prob):
    prob = np.asarray(prob, dtype=float)
    if np.any(~((prob > 0) & (prob < 1))):
        raise DomainError("probability must lie in (0, 1)")
    return (-np.log(-np.log(prob)))[()]


def standardize_max(sample_max, sc):
    return (sc.a_n * (np.asarray(sample_max, dtype=float) - sc.b_n))[()]


def heavytail_limit_cdf(t):
    """Formal limit exp(-1 / (t**2 - 1)) of the hard-wall maximum CDF, t > 1."""
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 1)):
        raise DomainError("heavy-tail limit is defined for t > 1")
    return np.exp(-1.0 / (t * t - 1.0))[()]


def heavytail_quantile(prob):
    prob = np.asarray(prob, dtype=float)
    if np.any(~((prob > 0) & (prob < 1))):
        raise DomainError("probability must lie in (0, 1)")
    return np.sqrt(1.0 - 1.0 / np.log(prob))[()]
