"""Adaptive Gauss-Kronrod (7/15) quadrature with a global interval queue."""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from ..errors import MaxDepthExceeded, NonFinite

# Kronrod 15-point abscissae on [-1, 1] (non-negative half) and weights;
# every second node belongs to the embedded 7-point Gauss rule.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KWEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[1:7:2] = _WG[:3]
_GWEIGHTS[7] = _WG[3]
_GWEIGHTS[9:14:2] = _WG[2::-1]

PEAK_FLOOR = 1e-300


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def _evaluate(f, x):
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.array([float(f(xi)) for xi in x])
    if not np.all(np.isfinite(y)):
        raise NonFinite("integrand returned a non-finite value")
    return y


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = _evaluate(f, mid + half * _NODES)
    kronrod = half * float(np.dot(_KWEIGHTS, y))
    gauss = half * float(np.dot(_GWEIGHTS, y))
    return kronrod, abs(kronrod - gauss)


def integrate_adaptive(f, lo, hi, tol=1e-10, rel_tol=0.0, points=(), max_intervals=4000):
    """Integrate ``f`` over ``[lo, hi]`` to ``max(tol, rel_tol * |value|)``.

    ``f`` is called with 15-element numpy arrays; scalar-only callables are
    tolerated (evaluated pointwise). ``points`` are optional interior
    breakpoints such as the location of a sharp peak.

    The error estimate is the raw |K15 - G7| difference summed over the
    final partition, which is conservative for smooth integrands.
    """
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    edges = sorted({lo, hi, *(float(p) for p in points if lo < p < hi)})
    heap = []
    total = err = 0.0
    evaluations = 0
    for a, b in zip(edges[:-1], edges[1:]):
        val, e = _gk15(f, a, b)
        evaluations += 15
        total += val
        err += e
        heapq.heappush(heap, (-e, a, b, val))

    while err > max(tol, rel_tol * abs(total)):
        if len(heap) >= max_intervals:
            raise MaxDepthExceeded(
                f"{len(heap)} intervals, error estimate {err:.3g} above tolerance"
            )
        neg_e, a, b, val = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not a < m < b:
            raise MaxDepthExceeded(f"interval [{a!r}, {b!r}] cannot be split further")
        v1, e1 = _gk15(f, a, m)
        v2, e2 = _gk15(f, m, b)
        evaluations += 30
        total += v1 + v2 - val
        err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, a, m, v1))
        heapq.heappush(heap, (-e2, m, b, v2))
        if err < 0.0:
            # drift from repeated add/subtract; recompute
            err = -sum(item[0] for item in heap)

    err = math.fsum(abs(item[0]) for item in heap)
    total = math.fsum(item[3] for item in heap)
    return QuadratureResult(total, err, evaluations)


def truncation_point(f, start, peak, floor=PEAK_FLOOR, limit=1e8):
    """Smallest ``start + h * 2**j`` (h = max(1, |start|) / 64) where ``f`` drops below ``floor * peak``.

    Used to replace an infinite upper limit by a finite one.
    """
    step = max(1.0, abs(start)) / 64.0
    x = start + step
    while float(_evaluate(f, np.array([x]))[0]) >= floor * peak:
        step *= 2.0
        x = start + step
        if x > limit:
            raise MaxDepthExceeded(f"integrand still above {floor:g} of peak at {limit:g}")
    return x


def integrate_intervals(f, a, b):
    """One 15-point Kronrod pass over each interval ``[a[i], b[i]]``.

    ``f`` must accept a 2-D array. Returns ``(values, error_estimates)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    y = np.asarray(f((0.5 * (a + b))[:, None] + half[:, None] * _NODES), dtype=float)
    if not np.all(np.isfinite(y)):
        raise NonFinite("integrand returned a non-finite value")
    kronrod = half * (y @ _KWEIGHTS)
    return kronrod, np.abs(kronrod - half * (y @ _GWEIGHTS))


def integrate_pieces(f, edges):
    """``integrate_intervals`` over consecutive pairs of ``edges``."""
    edges = np.asarray(edges, dtype=float)
    return integrate_intervals(f, edges[:-1], edges[1:])
