"""Independent layer radii of a determinantal (beta = 2) radial gas.

The sorted moduli of the n-particle gas have the law of the order
statistics of independent radii R_1, ..., R_n, where R_k has density
proportional to t**(2k-1) exp(-n V(t)) on (0, inf). Equivalently
exp(n F_k(t)) with the layer objective

    F_k(t) = ((2k - 1) / n) log t - V(t).

Exact samplers
--------------
* power V = t**alpha: n R_k**alpha ~ Gamma(2k/alpha, 1);
* log-confining V = c log(1 + t**2): R_k**2 / (1 + R_k**2) ~ Beta(k, cn - k);
* hard wall: R_k is Pareto, P(R_k > t) = t**(-2(n + 1 - k)) for t >= 1;
* otherwise (V'' >= a > 0): rejection from N(t_mode, 1 / (n a)), which
  dominates exp(n (F_k(t) - F_k(t_mode))) because F_k'' <= -a.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    EnvelopeViolation,
    MaxDepthExceeded,
    NoConvexityFloor,
    NoSolution,
    NumericError,
    ParameterError,
)
from .numerics import (
    expand_bracket,
    find_root_bracketed,
    integrate_intervals,
    integrate_pieces,
    log_reg_inc_beta,
    log_reg_inc_gamma_P,
    reg_inc_beta,
    reg_inc_gamma_P,
    sample_beta,
    sample_gamma,
)
from .numerics.quadrature import PEAK_FLOOR
from .potential import SEARCH_LIMIT, ExactPath, Power

ENVELOPE_SLACK = 1e-9
LOG_UNDERFLOW = -745.0


@dataclass(frozen=True)
class LayerObjective:
    n: int
    k: int
    t_mode: float
    curvature: float
    envelope_rate: float | None

    def value(self, p, t):
        return objective(p, self.n, self.k, t)


@dataclass
class ModuliSample:
    n: int
    potential: str
    moduli: np.ndarray
    master_seed: int | None = None
    replica_id: int | None = None


def objective(p, n, k, t):
    """F_k(t) = ((2k - 1) / n) log t - V(t)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        return ((2.0 * np.asarray(k) - 1.0) / n * np.log(t) - p._eval(t))[()]


def _check_layer(n, k):
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    k = np.asarray(k)
    if np.any((k < 1) | (k > n)) or np.any(k != np.floor(k)):
        raise ParameterError(f"layer index must be an integer in [1, {n}]")


def _supports_general(p):
    return p.exact_path is not ExactPath.INVERSE_CDF


def mode_of_layer(p, n, k):
    """Critical point and curvature of F_k (the Laplace data of layer k)."""
    _check_layer(n, k)
    if not _supports_general(p):
        raise ParameterError(f"{p} has no smooth layer objective")
    level = (2.0 * k - 1.0) / n
    if isinstance(p, Power):
        t = (level / p.alpha) ** (1.0 / p.alpha)
    else:
        f = lambda s: level - float(p._rdv(np.asarray(s)))
        try:
            hi = expand_bracket(f, 0.0, 1.0, limit=SEARCH_LIMIT)
            t = find_root_bracketed(f, 0.0, hi, tol=1e-14)
        except NumericError as exc:
            raise NoSolution(f"no critical point for layer {k} of {p}: {exc}") from exc
    curvature = float(-level / (t * t) - p._d2(np.asarray(t)))
    return LayerObjective(int(n), int(k), float(t), curvature, p.convexity_floor_a)


@lru_cache(maxsize=64)
def _modes(p, n):
    """t_mode for k = 1..n by vectorized bisection on r V'(r) = (2k-1)/n."""
    levels = (2.0 * np.arange(1, n + 1) - 1.0) / n
    if isinstance(p, Power):
        modes = (levels / p.alpha) ** (1.0 / p.alpha)
    else:
        hi = 1.0
        while float(p._rdv(np.asarray(hi))) < levels[-1]:
            hi *= 2.0
            if hi > SEARCH_LIMIT:
                raise NoSolution(f"r V'(r) stays below {levels[-1]:g} for {p}")
        lo = np.zeros(n)
        up = np.full(n, hi)
        for _ in range(200):
            mid = 0.5 * (lo + up)
            below = p._rdv(mid) < levels
            lo = np.where(below, mid, lo)
            up = np.where(below, up, mid)
            if np.all(up - lo <= 4e-16 * up):
                break
        modes = 0.5 * (lo + up)
    modes.flags.writeable = False
    return modes


def layer_modes(p, n):
    """Read-only array of layer modes for k = 1..n (cached per potential and n)."""
    _check_layer(n, 1)
    return _modes(p, int(n))


def rejection_sample(p, n, ks, rng):
    """Draw one radius per entry of ``ks`` by Gaussian-envelope rejection.

    Returns ``(draws, proposals)``. Every proposal's log acceptance ratio is
    checked against the envelope inequality; a violation beyond
    ``ENVELOPE_SLACK`` raises ``EnvelopeViolation`` instead of silently
    biasing the draw.
    """
    a = p.convexity_floor_a
    if a is None or not a > 0:
        raise NoConvexityFloor(f"{p} has no convexity floor; general sampler unavailable")
    ks = np.asarray(ks, dtype=np.int64)
    _check_layer(n, ks)
    modes = _modes(p, int(n))[ks - 1]
    levels = (2.0 * ks - 1.0) / n
    sd = 1.0 / np.sqrt(n * a)
    v_mode = p._eval(modes)
    log_mode = np.log(modes)

    out = np.empty(ks.size)
    pending = np.arange(ks.size)
    proposals = 0
    while pending.size:
        z = rng.normal(pending.size)
        u = rng.uniform(pending.size)
        proposals += pending.size
        tm = modes[pending]
        t = tm + sd * z
        pos = t > 0
        tp = np.where(pos, t, 1.0)
        dF = levels[pending] * (np.log(tp) - log_mode[pending]) - (p._eval(tp) - v_mode[pending])
        log_acc = n * dF + 0.5 * n * a * (tp - tm) ** 2
        if np.any(pos & ~(log_acc <= ENVELOPE_SLACK)):
            worst = float(np.max(np.where(pos, log_acc, -np.inf)))
            raise EnvelopeViolation(f"log acceptance {worst:.3g} > 0 for {p}, n = {n}")
        ok = pos & (np.log(u) <= log_acc)
        out[pending[ok]] = t[ok]
        pending = pending[~ok]
    return out, proposals


def sample_layers(p, n, ks, rng, method="auto"):
    """One independent draw of R_k for each k in ``ks``.

    ``method`` is ``"auto"`` (exact transform when the family has one,
    rejection otherwise), ``"exact"`` or ``"general"`` (force rejection).
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=np.int64))
    _check_layer(n, ks)
    path = p.exact_path
    if method == "general" or (method == "auto" and path is ExactPath.NONE):
        return rejection_sample(p, n, ks, rng)[0]
    if method not in ("auto", "exact"):
        raise ParameterError(f"unknown sampling method {method!r}")
    if path is ExactPath.GAMMA_TRANSFORM:
        g = sample_gamma(2.0 * ks / p.alpha, rng)
        return (g / n) ** (1.0 / p.alpha)
    if path is ExactPath.BETA_TRANSFORM:
        b_shape = p.c * n - ks
        if np.any(b_shape <= 0):
            raise ParameterError(f"c n = {p.c * n:g} must exceed k for the Beta transform")
        b = sample_beta(ks.astype(float), b_shape, rng)
        return np.sqrt(b / (1.0 - b))
    if path is ExactPath.INVERSE_CDF:
        _check_hardwall(p, n)
        u = rng.uniform(ks.size)
        return u ** (-1.0 / (2.0 * (n + 1 - ks)))
    raise ParameterError(f"{p} has no exact sampler")


def _check_hardwall(p, n):
    if p.n != n:
        raise ParameterError(f"{p} is built for n = {p.n}, not {n}")


def sample_layer(p, n, k, rng, method="auto"):
    return float(sample_layers(p, n, [k], rng, method)[0])


def sample_gas(p, n, rng, method="auto"):
    """Moduli of one gas realization, sorted in decreasing order."""
    moduli = sample_layers(p, n, np.arange(1, n + 1), rng, method)
    moduli = np.sort(moduli)[::-1].copy()
    return ModuliSample(
        n=int(n),
        potential=str(p),
        moduli=moduli,
        master_seed=getattr(rng, "master_seed", None),
        replica_id=getattr(rng, "stream_id", None),
    )


# --- layer CDFs -------------------------------------------------------------

class _LayerQuadrature:
    """Normalized layer density exp(n (F_k - F_k(mode))) and its cumulative integral.

    The effective support [lo, hi] (density above 1e-300 of its peak) is cut
    into pieces, refined until each piece's Kronrod/Gauss gap is below
    1e-15 of the total mass, so a CDF value costs one lookup plus a single
    15-point rule on part of one piece.
    """

    PIECE_TOL = 1e-15

    def __init__(self, p, n, k):
        self.p, self.n, self.k = p, n, k
        self.level = (2.0 * k - 1.0) / n
        self.mode = float(_modes(p, n)[k - 1])
        self.f_mode = float(objective(p, n, k, self.mode))
        self.lo = self._edge(-1.0, PEAK_FLOOR)
        self.hi = self._edge(1.0, PEAK_FLOOR)
        edges = np.unique(np.concatenate([
            np.linspace(self.lo, self.mode, 17),
            np.linspace(self.mode, self.hi, 17),
        ]))
        self.edges, values = self._refine(edges)
        self.cum = np.concatenate([[0.0], np.cumsum(values)])
        self.total = float(self.cum[-1])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        pos = t > 0
        tp = np.where(pos, t, 1.0)
        with np.errstate(over="ignore", under="ignore"):
            g = np.exp(self.n * (self.level * np.log(tp) - self.p._eval(tp) - self.f_mode))
        return np.where(pos, g, 0.0)

    def _edge(self, direction, floor):
        # Walk away from the mode, doubling the step, until the density has
        # dropped below floor (relative to its peak value 1).
        step = max(self.mode, 1.0) / 1024.0
        while True:
            x = self.mode + direction * step
            if direction < 0 and x <= 0:
                return 0.0
            if float(self(np.array([x]))[0]) < floor:
                return x
            step *= 2.0
            if step > SEARCH_LIMIT:
                raise NoSolution(f"layer {self.k} density does not decay")

    def _refine(self, edges):
        for _ in range(60):
            values, errors = integrate_pieces(self, edges)
            scale = max(values.sum(), np.finfo(float).tiny)
            bad = errors > self.PIECE_TOL * scale
            if not bad.any():
                return edges, values
            mids = 0.5 * (edges[:-1] + edges[1:])[bad]
            edges = np.sort(np.concatenate([edges, mids]))
        raise MaxDepthExceeded(f"layer {self.k}: quadrature partition did not converge")

    def cdf_sorted(self, ts):
        """Layer CDF at points ``ts`` (any order)."""
        ts = np.asarray(ts, dtype=float)
        out = np.where(ts >= self.hi, 1.0, 0.0)
        inner = (ts > self.lo) & (ts < self.hi)
        x = ts[inner]
        if x.size:
            i = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, self.edges.size - 2)
            start = self.edges[i]
            stop = self.edges[i + 1]
            head, _ = integrate_intervals(self, start, x)
            tail, _ = integrate_intervals(self, x, stop)
            left = self.cum[i] + head
            right = (self.total - self.cum[i + 1]) + tail
            cdf = np.where(x <= self.mode, left / self.total, 1.0 - right / self.total)
            out[inner] = np.clip(cdf, 0.0, 1.0)
        return out


@lru_cache(maxsize=4096)
def _layer_quadrature(p, n, k):
    return _LayerQuadrature(p, n, k)


def layer_cdf(p, n, k, t, method="auto"):
    """P(R_k <= t); closed form on exact paths, ratio of quadratures otherwise.

    ``method="quadrature"`` forces the quadrature route (an independent
    oracle for the closed forms).
    """
    _check_layer(n, k)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ParameterError("t must be non-negative")
    path = p.exact_path if method == "auto" else ExactPath.NONE
    if path is ExactPath.GAMMA_TRANSFORM:
        return reg_inc_gamma_P(2.0 * k / p.alpha, n * t_arr**p.alpha)
    if path is ExactPath.BETA_TRANSFORM:
        if p.c * n <= k:
            raise ParameterError(f"c n = {p.c * n:g} must exceed k for the Beta transform")
        return reg_inc_beta(k, p.c * n - k, t_arr**2 / (1.0 + t_arr**2))
    if path is ExactPath.INVERSE_CDF:
        _check_hardwall(p, n)
        with np.errstate(divide="ignore"):
            tail = np.where(t_arr >= 1.0, t_arr ** (-2.0 * (n + 1 - k)), 1.0)
        return (1.0 - tail)[()]
    if not _supports_general(p):
        raise ParameterError(f"{p} has no smooth layer density")
    quad = _layer_quadrature(p, int(n), int(k))
    flat = t_arr.ravel()
    order = np.argsort(flat, kind="stable")
    out = np.empty(flat.size)
    out[order] = quad.cdf_sorted(flat[order])
    return out.reshape(t_arr.shape)[()]


def log_max_cdf(p, n, t, method="auto"):
    """log P(max_k R_k <= t) = sum_k log P(R_k <= t), vectorized over t."""
    _check_layer(n, 1)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ParameterError("t must be non-negative")
    flat = t_arr.ravel()
    out = np.empty(flat.size)
    ks = np.arange(1, n + 1, dtype=float)
    path = p.exact_path if method == "auto" else ExactPath.NONE
    chunk = max(1, 2_000_000 // n)
    with np.errstate(divide="ignore"):
        for start in range(0, flat.size, chunk):
            tt = flat[start:start + chunk, None]
            if path is ExactPath.GAMMA_TRANSFORM:
                terms = log_reg_inc_gamma_P(2.0 * ks / p.alpha, n * tt**p.alpha)
            elif path is ExactPath.BETA_TRANSFORM:
                if p.c * n <= n:
                    raise ParameterError("c n must exceed n for the Beta transform")
                terms = log_reg_inc_beta(ks, p.c * n - ks, tt**2 / (1.0 + tt**2))
            elif path is ExactPath.INVERSE_CDF:
                _check_hardwall(p, n)
                # prod_k (1 - t^-2(n+1-k)) = prod_j (1 - t^-2j)
                safe = np.maximum(tt, 1.0)
                terms = np.where(tt >= 1.0, np.log1p(-safe ** (-2.0 * ks)), -np.inf)
            else:
                terms = np.stack([
                    np.log(layer_cdf(p, n, int(k), tt[:, 0], "quadrature")) for k in ks
                ], axis=1)
            out[start:start + chunk] = terms.sum(axis=1)
    return out.reshape(t_arr.shape)[()]


def exact_max_cdf(p, n, t, method="auto"):
    """P(|z|_(1) <= t) as a product of layer CDFs, computed in log space.

    Log-products below -745 are reported as exactly 0.
    """
    logp = np.asarray(log_max_cdf(p, n, t, method))
    return np.where(logp < LOG_UNDERFLOW, 0.0, np.exp(logp))[()]
