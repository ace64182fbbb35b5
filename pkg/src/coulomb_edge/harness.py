"""Replica-parallel experiments, goodness of fit and bit-stable emission.

Replica ``i`` of an experiment only ever touches ``substream(master_seed, i)``
and results are gathered by replica index, so every output is a function of
the configuration alone; the thread count changes wall time, never bytes.
"""

import csv
import enum
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .edge import (
    gumbel_cdf,
    gumbel_quantile,
    heavytail_limit_cdf,
    heavytail_quantile,
    scaling_for,
    standardize_max,
)
from .equilibrium import equilibrium_profile, radial_cdf
from .errors import AssumptionViolated, EmptySample, ParameterError, SubcriticalN
from .layers import exact_max_cdf, sample_gas, sample_layers
from .numerics import find_root_bracketed, substream
from .potential import HardWallPareto, parse_potential

QUANTILE_PROBS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
MIN_REPLICAS = 50
THREADS_ENV = "COULOMB_EDGE_THREADS"
POLICY_NOTE = "fixed-n tolerances are artifact policy; no finite-n error bars are known"


class Law(enum.Enum):
    GUMBEL = "gumbel"
    EXACT = "exact"
    HEAVY_TAIL = "heavytail"


def default_threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class ExperimentConfig:
    potential: str
    n: int
    replicas: int = 1000
    master_seed: int = 0
    law: Law = Law.EXACT
    threads: int = field(default_factory=default_threads)
    method: str = "auto"
    t_grid: tuple = (1.5, 2.0, 3.0)
    out: str | None = None
    report: str | None = None

    def __post_init__(self):
        self.law = Law(self.law)
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n}")
        if self.threads < 1:
            raise ParameterError("threads must be >= 1")

    def build_potential(self):
        return parse_potential(self.potential, self.n)


# --- Kolmogorov-Smirnov -------------------------------------------------------

def kolmogorov_sf(lam, term_floor=1e-12):
    """P(K > lam) for the Kolmogorov limit law.

    2 sum_k (-1)^(k-1) exp(-2 k^2 lam^2), truncated once terms fall below
    ``term_floor``; for lam < 1 the equivalent theta-function form
    1 - sqrt(2 pi) / lam sum_k exp(-(2k-1)^2 pi^2 / (8 lam^2)) converges
    faster and is used instead.
    """
    lam = float(lam)
    if lam <= 0.0:
        return 1.0
    total = 0.0
    k = 1
    if lam < 1.0:
        while True:
            term = math.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8.0 * lam * lam))
            total += term
            if term < term_floor:
                break
            k += 1
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / lam * total))
    while True:
        term = math.exp(-2.0 * k * k * lam * lam)
        total += term if k % 2 else -term
        if term < term_floor:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_statistic(samples, reference_cdf):
    """Two-sided KS distance of sorted ``samples`` to ``reference_cdf`` and its p-value."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise EmptySample("KS statistic of an empty sample")
    if np.any(np.diff(x) < 0):
        raise ParameterError("samples must be sorted")
    m = x.size
    F = np.broadcast_to(np.asarray(reference_cdf(x), dtype=float), x.shape)
    i = np.arange(1, m + 1)
    D = float(max(np.max(i / m - F), np.max(F - (i - 1) / m)))
    return D, kolmogorov_sf(math.sqrt(m) * D)


# --- reports ------------------------------------------------------------------

@dataclass
class GofReport:
    law: str
    potential: str
    n: int
    m: int
    master_seed: int
    statistic: str
    D: float
    p_value: float
    quantiles: list
    scaling: dict | None
    t_grid: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "law": self.law,
            "potential": self.potential,
            "n": self.n,
            "m": self.m,
            "master_seed": self.master_seed,
            "statistic": self.statistic,
            "D": self.D,
            "p_value": self.p_value,
            "quantiles": self.quantiles,
            "scaling": self.scaling,
            "t_grid": self.t_grid,
            "notes": self.notes,
        }


@dataclass
class EdgeExperiment:
    report: GofReport
    maxima: np.ndarray
    statistics: np.ndarray

    def rows(self):
        return [(i, float(mx), float(s)) for i, (mx, s) in enumerate(zip(self.maxima, self.statistics))]


@dataclass
class BulkReport:
    potential: str
    n: int
    master_seed: int
    r0: float
    R0: float
    sup_distance: float
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "potential": self.potential,
            "n": self.n,
            "master_seed": self.master_seed,
            "r0": self.r0,
            "R0": self.R0,
            "sup_distance": self.sup_distance,
            "notes": self.notes,
        }


# --- experiments --------------------------------------------------------------

def _chunks(m, parts):
    size = max(1, math.ceil(m / parts))
    return [range(s, min(m, s + size)) for s in range(0, m, size)]


def replica_maxima(p, n, master_seed, replicas, threads=1, method="auto"):
    """Largest modulus of ``replicas`` independent gases; entry i uses substream i.

    Every replica draws all n layers, even though only the maximum is kept.
    """
    ks = np.arange(1, n + 1)
    out = np.empty(replicas)

    def work(block):
        for i in block:
            out[i] = sample_layers(p, n, ks, substream(master_seed, i), method).max()

    blocks = _chunks(replicas, 4 * threads)
    if threads == 1:
        for block in blocks:
            work(block)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, blocks))
    return out


def _invert(cdf, prob, guess):
    f = lambda x: float(cdf(np.array([x]))[0]) - prob
    step = max(1.0, abs(guess))
    lo, hi = guess - step, guess + step
    while f(lo) > 0:
        step *= 2.0
        lo = guess - step
    while f(hi) < 0:
        step *= 2.0
        hi = guess + step
    return find_root_bracketed(f, lo, hi, tol=1e-10)


def quantile_table(sorted_stats, cdf, quantile=None, probs=QUANTILE_PROBS):
    rows = []
    for prob in probs:
        emp = float(np.quantile(sorted_stats, prob, method="inverted_cdf"))
        ref = float(quantile(prob)) if quantile is not None else _invert(cdf, prob, emp)
        rows.append({"prob": prob, "empirical": emp, "reference": ref})
    return rows


def _heavy_tail_rows(p, n, maxima, grid):
    m = maxima.size
    rows = []
    for t in grid:
        exact = float(exact_max_cdf(p, n, t))
        emp = float(np.mean(maxima <= t))
        se = math.sqrt(exact * (1.0 - exact) / m)
        rows.append({
            "t": float(t),
            "empirical": emp,
            "exact": exact,
            "formal_limit": float(heavytail_limit_cdf(t)) if t > 1 else 0.0,
            "binomial_se": se,
            "z": (emp - exact) / se if se > 0 else 0.0,
        })
    return rows


def run_edge_experiment(cfg):
    """Sample m gas maxima and test them against the configured law.

    Raises before any sampling if the configuration is not admissible, and
    writes ``cfg.out`` / ``cfg.report`` only after everything succeeded.
    """
    p = cfg.build_potential()
    n, m = int(cfg.n), int(cfg.replicas)
    if m < MIN_REPLICAS:
        raise ParameterError(f"p-values need at least {MIN_REPLICAS} replicas, got {m}")
    hardwall = isinstance(p, HardWallPareto)
    if cfg.law is Law.HEAVY_TAIL and not hardwall:
        raise ParameterError("the heavy-tail law applies to the hard-wall potential only")

    sc = None
    if not hardwall:
        try:
            sc = scaling_for(p, n)
        except (SubcriticalN, AssumptionViolated):
            if cfg.law is Law.GUMBEL:
                raise
    if cfg.law is Law.GUMBEL and sc is None:
        raise ParameterError("the Gumbel law needs scaling constants")

    notes = [POLICY_NOTE]
    maxima = replica_maxima(p, n, cfg.master_seed, m, cfg.threads, cfg.method)
    if sc is not None:
        stats = standardize_max(maxima, sc)
        statistic = "a_n (max - b_n)"
        to_t = lambda x: sc.b_n + np.asarray(x) / sc.a_n
    else:
        stats = maxima.copy()
        statistic = "max"
        to_t = lambda x: np.asarray(x)

    quantile = None
    if cfg.law is Law.GUMBEL:
        cdf = gumbel_cdf
        quantile = gumbel_quantile
    elif cfg.law is Law.EXACT:
        cdf = lambda x: exact_max_cdf(p, n, np.maximum(to_t(x), 0.0))
    else:
        cdf = lambda t: np.where(np.asarray(t) > 1.0, heavytail_limit_cdf(np.maximum(t, 1.0 + 1e-300)), 0.0)
        quantile = heavytail_quantile
        notes.append("heavy-tail limit is formal; reported, not a theorem-level check")

    ordered = np.sort(stats)
    D, p_value = ks_statistic(ordered, cdf)
    report = GofReport(
        law=cfg.law.value,
        potential=str(p),
        n=n,
        m=m,
        master_seed=int(cfg.master_seed),
        statistic=statistic,
        D=D,
        p_value=p_value,
        quantiles=quantile_table(ordered, cdf, quantile),
        scaling=sc.to_dict() if sc is not None else None,
        t_grid=_heavy_tail_rows(p, n, maxima, cfg.t_grid) if hardwall else [],
        notes=notes,
    )
    result = EdgeExperiment(report, maxima, stats)
    if cfg.out:
        emit_csv(cfg.out, ("replica_id", "max_modulus", "statistic"), result.rows())
    if cfg.report:
        emit_json(report.to_dict(), cfg.report)
    return result


def run_bulk_experiment(cfg):
    """Sup-distance between one gas's radial empirical CDF and the equilibrium CDF."""
    p = cfg.build_potential()
    profile = equilibrium_profile(p, 2.0)
    gas = sample_gas(p, int(cfg.n), substream(cfg.master_seed, 0), cfg.method)
    D, _ = ks_statistic(gas.moduli[::-1], lambda r: radial_cdf(profile, r))
    report = BulkReport(str(p), int(cfg.n), int(cfg.master_seed), profile.r0, profile.R0, D, [POLICY_NOTE])
    if cfg.report:
        emit_json(report.to_dict(), cfg.report)
    return report


def sample_rows(p, n, master_seed, replicas, method="auto"):
    """(replica_id, rank, modulus) rows of ``replicas`` sampled gases."""
    rows = []
    for i in range(replicas):
        gas = sample_gas(p, n, substream(master_seed, i), method)
        rows.extend((i, rank, float(r)) for rank, r in enumerate(gas.moduli, start=1))
    return rows


# --- emission -----------------------------------------------------------------

def format_real(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_real(v)
    return str(v)


def render_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def emit_csv(path, header, rows):
    """Write rows with a fixed column order; reals use 17 significant digits."""
    _write(path, render_csv(header, rows))


def emit_quantiles_csv(report, path):
    rows = [(q["prob"], q["empirical"], q["reference"]) for q in report.quantiles]
    emit_csv(path, ("prob", "empirical", "reference"), rows)


def render_json(obj, indent=2, _level=0):
    """JSON text with every real printed at 17 significant digits.

    Non-finite reals become ``null``.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_real(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, enum.Enum):
        return render_json(obj.value, indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{render_json(str(k))}: {render_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + render_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_json(obj, path):
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    _write(path, render_json(obj) + "\n")
