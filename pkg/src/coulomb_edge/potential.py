"""Radial confining potentials V(r) with exact derivatives.

Each potential knows ``eval``, ``d1``, ``d2``, ``d3`` and ``rdv`` (the radial
profile r V'(r), finite at r = 0 for every family here), plus which exact
layer sampler applies to it.
"""

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, NoSignChange, NumericError, ParameterError
from .numerics import expand_bracket, find_root_bracketed


class Family(enum.Enum):
    POWER = "power"
    LOG_CONFINING = "logconfining"
    HARD_WALL = "hardwall"
    QUARTIC = "quartic"
    CUSTOM = "custom"


class ExactPath(enum.Enum):
    GAMMA_TRANSFORM = "gamma"
    BETA_TRANSFORM = "beta"
    INVERSE_CDF = "inverse_cdf"
    NONE = "none"


# x_max for solve_t_x bracketing, and the geometric grid used for scans.
SEARCH_LIMIT = 1e6
GRID_MIN = 1e-6
GRID_POINTS = 10_000
FLOOR_SAFETY = 0.99


def _term(coef, r, p):
    """coef * r**p, defined as 0 when coef == 0 (avoids 0 * inf at r = 0)."""
    if coef == 0.0:
        return np.zeros_like(r)
    with np.errstate(divide="ignore"):
        return coef * np.power(r, p)


class Potential:
    """Base class; subclasses are frozen dataclasses."""

    family: Family
    exact_path: ExactPath = ExactPath.NONE
    domain_min = 0.0
    convexity_certified = True

    def _r(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(~(r >= self.domain_min)):
            raise DomainError(f"{self}: r must be >= {self.domain_min}")
        return r

    def eval(self, r):
        return self._eval(self._r(r))[()]

    def d1(self, r):
        return self._d1(self._r(r))[()]

    def d2(self, r):
        return self._d2(self._r(r))[()]

    def d3(self, r):
        return self._d3(self._r(r))[()]

    def rdv(self, r):
        """r V'(r); the equilibrium radial CDF is this divided by beta."""
        return self._rdv(self._r(r))[()]

    def _rdv(self, r):
        return r * self._d1(r)

    @property
    def parameters(self):
        return ()

    @cached_property
    def convexity_floor_a(self):
        """A lower bound ``a > 0`` on V'' (assumption A1), or ``None``."""
        return self._analytic_floor()

    def _analytic_floor(self):
        return None

    def edge_radius(self, beta=2.0):
        """Smallest R with R V'(R) = beta (no r0 handling; see ``equilibrium``)."""
        f = lambda t: float(self._rdv(np.asarray(t))) - beta
        lo = max(self.domain_min, 0.0)
        hi = expand_bracket(f, lo, max(1.0, lo * 2), limit=SEARCH_LIMIT)
        return find_root_bracketed(f, lo, hi)

    def scan_grid(self, upper=None):
        if upper is None:
            try:
                upper = 4.0 * self.edge_radius()
            except NumericError:
                upper = 10.0
        lo = max(GRID_MIN, self.domain_min)
        return np.geomspace(lo, max(upper, 2 * lo), GRID_POINTS)


@dataclass(frozen=True)
class Power(Potential):
    """V(t) = t**alpha, alpha >= 1."""

    alpha: float
    family = Family.POWER
    exact_path = ExactPath.GAMMA_TRANSFORM

    def __post_init__(self):
        if not self.alpha >= 1.0:
            raise ParameterError(f"power potential needs alpha >= 1, got {self.alpha}")

    def __str__(self):
        return f"power:alpha={self.alpha:g}"

    @property
    def parameters(self):
        return (self.alpha,)

    def _eval(self, r):
        return np.power(r, self.alpha)

    def _d1(self, r):
        return _term(self.alpha, r, self.alpha - 1)

    def _d2(self, r):
        return _term(self.alpha * (self.alpha - 1), r, self.alpha - 2)

    def _d3(self, r):
        a = self.alpha
        return _term(a * (a - 1) * (a - 2), r, a - 3)

    def _rdv(self, r):
        return self.alpha * np.power(r, self.alpha)

    def _analytic_floor(self):
        # V'' = a(a-1) t^(a-2): constant 2 at a = 2, otherwise inf V'' = 0
        # (at t -> 0 for a > 2, at t -> inf for a < 2).
        return 2.0 if self.alpha == 2.0 else None


@dataclass(frozen=True)
class LogConfining(Potential):
    """V(t) = c log(1 + t**2), c > 1 (heavy-tailed layers)."""

    c: float
    family = Family.LOG_CONFINING
    exact_path = ExactPath.BETA_TRANSFORM

    def __post_init__(self):
        if not self.c > 1.0:
            raise ParameterError(f"log-confining potential needs c > 1, got {self.c}")

    def __str__(self):
        return f"logconfining:c={self.c:g}"

    @property
    def parameters(self):
        return (self.c,)

    def _eval(self, r):
        return self.c * np.log1p(r * r)

    def _d1(self, r):
        return 2.0 * self.c * r / (1.0 + r * r)

    def _d2(self, r):
        s = 1.0 + r * r
        return 2.0 * self.c * (1.0 - r * r) / (s * s)

    def _d3(self, r):
        s = 1.0 + r * r
        return 4.0 * self.c * r * (r * r - 3.0) / (s * s * s)

    def _rdv(self, r):
        r2 = r * r
        return 2.0 * self.c * r2 / (1.0 + r2)


@dataclass(frozen=True)
class HardWallPareto(Potential):
    """The formal potential +inf on (0, 1), 2 (1 + 1/n) log t on [1, inf).

    It depends on the gas size ``n``; with it the k-th layer is Pareto with
    tail exponent 2 (n + 1 - k).
    """

    n: int
    family = Family.HARD_WALL
    exact_path = ExactPath.INVERSE_CDF
    domain_min = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"hard-wall potential needs an integer n >= 1, got {self.n}")

    def __str__(self):
        return f"hardwall:n={self.n}"

    @property
    def parameters(self):
        return (float(self.n),)

    @property
    def slope(self):
        return 2.0 * (1.0 + 1.0 / self.n)

    def _eval(self, r):
        return self.slope * np.log(r)

    def _d1(self, r):
        return self.slope / r

    def _d2(self, r):
        return -self.slope / (r * r)

    def _d3(self, r):
        return 2.0 * self.slope / (r * r * r)

    def _rdv(self, r):
        return np.full_like(r, self.slope)


@dataclass(frozen=True)
class Quartic(Potential):
    """V(t) = t**4 / 4 + t**2 / 2; strictly convex with V'' >= 1 and t0 = 1."""

    family = Family.QUARTIC

    def __str__(self):
        return "quartic"

    def _eval(self, r):
        r2 = r * r
        return 0.25 * r2 * r2 + 0.5 * r2

    def _d1(self, r):
        return r * r * r + r

    def _d2(self, r):
        return 3.0 * r * r + 1.0

    def _d3(self, r):
        return 6.0 * r

    def _rdv(self, r):
        r2 = r * r
        return r2 * r2 + r2

    def _analytic_floor(self):
        return 1.0


@dataclass(frozen=True)
class Custom(Potential):
    """V(t) = sum_i c_i t**p_i + d log(1 + t**2), with p_i > 0.

    The convexity floor, when it exists, comes from a grid scan of V'' and
    is therefore heuristic (``convexity_certified`` is False).
    """

    terms: tuple = ()
    log_coef: float = 0.0
    family = Family.CUSTOM
    convexity_certified = False

    def __post_init__(self):
        terms = tuple((float(c), float(p)) for c, p in self.terms)
        if any(not p > 0 for _, p in terms):
            raise ParameterError("custom potential powers must be positive")
        if not terms and self.log_coef == 0.0:
            raise ParameterError("custom potential has no terms")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "log_coef", float(self.log_coef))

    def __str__(self):
        poly = ";".join(f"{c:g}@{p:g}" for c, p in self.terms)
        return f"custom:poly={poly},log={self.log_coef:g}"

    @property
    def parameters(self):
        return tuple(x for term in self.terms for x in term) + (self.log_coef,)

    def _sum(self, r, order):
        out = np.zeros_like(r)
        for c, p in self.terms:
            coef, power = c, p
            for j in range(order):
                coef *= p - j
                power -= 1
            out = out + _term(coef, r, power)
        d = self.log_coef
        if d:
            s = 1.0 + r * r
            out = out + d * (
                np.log1p(r * r),
                2.0 * r / s,
                2.0 * (1.0 - r * r) / (s * s),
                4.0 * r * (r * r - 3.0) / (s * s * s),
            )[order]
        return out

    def _eval(self, r):
        return self._sum(r, 0)

    def _d1(self, r):
        return self._sum(r, 1)

    def _d2(self, r):
        return self._sum(r, 2)

    def _d3(self, r):
        return self._sum(r, 3)

    def _rdv(self, r):
        out = np.zeros_like(r)
        for c, p in self.terms:
            out = out + c * p * np.power(r, p)
        if self.log_coef:
            out = out + 2.0 * self.log_coef * r * r / (1.0 + r * r)
        return out

    def _d2_at_zero(self):
        # limit of V'' as r -> 0+, read off the lowest-order term
        coefs = {}
        for c, p in self.terms:
            coefs[p - 2.0] = coefs.get(p - 2.0, 0.0) + c * p * (p - 1.0)
        coefs[0.0] = coefs.get(0.0, 0.0) + 2.0 * self.log_coef
        live = sorted(e for e, c in coefs.items() if c != 0.0)
        if not live:
            return 0.0
        e = live[0]
        if e < 0:
            return math.copysign(math.inf, coefs[e])
        return coefs[e] if e == 0 else 0.0

    @cached_property
    def convexity_floor_a(self):
        floor = min(float(np.min(self._d2(self.scan_grid()))), self._d2_at_zero()) * FLOOR_SAFETY
        return floor if floor > 0 else None


@dataclass
class ValidationReport:
    growth_ok: bool
    a1_ok: bool
    a1_floor: float | None
    a2_ok: bool
    standing_ok: bool
    messages: list = field(default_factory=list)


def _growth(p, beta, messages):
    if isinstance(p, (Power, Quartic)):
        return True
    if isinstance(p, LogConfining):
        beta_prime = 0.5 * (beta + 2.0 * p.c)
        ok = 2.0 * p.c > beta_prime > beta and beta_prime >= 1.0
        if not ok:
            messages.append(f"growth: need 2c > beta' > beta with beta' = {beta_prime:g}")
        return ok
    if isinstance(p, HardWallPareto):
        messages.append("hard-wall potential is formal; growth holds with 2 < beta' <= 2 + 2/n")
        return beta < p.slope
    if isinstance(p, Custom):
        if p.terms:
            c, _ = max(p.terms, key=lambda term: term[1])
            ok = c > 0
        else:
            ok = 2.0 * p.log_coef > beta and beta + 2.0 * p.log_coef >= 2.0
        if not ok:
            messages.append("growth: leading term does not confine")
        return ok
    messages.append(f"growth: no criterion for {type(p).__name__}")
    return False


def _crossings(values):
    s = np.sign(values)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def validate(p, beta=2.0):
    """Check integrability, the standing monotonicity assumption, A1 and A2.

    Failures are reported, never raised.
    """
    if not beta > 0:
        raise DomainError("beta must be positive")
    messages = []
    growth_ok = _growth(p, beta, messages)

    if isinstance(p, HardWallPareto):
        messages.append("hard-wall potential: A1/A2 not applicable (formal only)")
        return ValidationReport(growth_ok, False, None, False, True, messages)

    grid = p.scan_grid()
    rdv = p._rdv(grid)
    rdv_increasing = bool(np.all(np.diff(rdv) > 0))
    convex = bool(np.all(p._d2(grid) >= 0))
    standing_ok = rdv_increasing or convex
    if not rdv_increasing:
        messages.append("r V'(r) is not increasing: the equilibrium measure may sit on several rings")
    if not standing_ok:
        messages.append("neither r V'(r) increasing nor V convex")

    floor = p.convexity_floor_a
    a1_ok = floor is not None and floor > 0
    if not a1_ok:
        messages.append("A1: no positive lower bound on V''")
    elif not p.convexity_certified:
        messages.append(f"A1: floor {floor:.6g} from a grid scan of V'' (heuristic)")

    a2_ok = True
    for x in (0.0, 1.0, 2.0):
        try:
            solve_t_x(p, x)
        except NumericError as exc:
            a2_ok = False
            messages.append(f"A2: no t_x for x = {x:g} ({exc})")
            continue
        if _crossings(rdv - (2.0 - x)) > 1:
            a2_ok = False
            messages.append(f"A2: t_x not unique for x = {x:g}")
    return ValidationReport(growth_ok, a1_ok, floor, a2_ok, standing_ok, messages)


def solve_t_x(p, x):
    """The radius t with t V'(t) = 2 - x, for x in [0, 2]."""
    if not 0.0 <= x <= 2.0:
        raise DomainError(f"x must lie in [0, 2], got {x}")
    target = 2.0 - x
    f = lambda t: float(p._rdv(np.asarray(t, dtype=float))) - target
    lo = p.domain_min
    if not math.isfinite(float(p._rdv(np.asarray(lo)))):
        lo = max(lo, 1e-12)
    hi = expand_bracket(f, lo, max(1.0, 2.0 * lo), limit=SEARCH_LIMIT)
    t = find_root_bracketed(f, lo, hi, tol=1e-14)
    if abs(f(t)) > 1e-10:
        raise NoSignChange(f"t_x residual {f(t):.3g} above 1e-10")
    return t


def _kv(body):
    out = {}
    for item in filter(None, body.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ParameterError(f"expected key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def parse_potential(spec, n=None):
    """Build a potential from a CLI spec string.

    ``power:alpha=2``, ``logconfining:c=2``, ``quartic``, ``hardwall`` (takes
    ``n`` from the argument unless ``hardwall:n=...`` is given) and
    ``custom:poly=0.25@4;0.5@2,log=0`` (coefficient@power terms).
    """
    name, _, body = spec.strip().partition(":")
    name = name.lower()
    kv = _kv(body)
    try:
        if name == "power":
            return Power(float(kv.get("alpha", 2)))
        if name == "logconfining":
            return LogConfining(float(kv["c"]))
        if name == "quartic":
            return Quartic()
        if name == "hardwall":
            size = int(kv.get("n", n if n is not None else 0))
            return HardWallPareto(size)
        if name == "custom":
            terms = []
            for item in filter(None, kv.get("poly", "").split(";")):
                c, _, p = item.partition("@")
                terms.append((float(c), float(p)))
            return Custom(tuple(terms), float(kv.get("log", 0)))
    except (KeyError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"bad potential spec {spec!r}: {exc}") from exc
    raise ParameterError(f"unknown potential family {name!r}")
