"""Bracketed scalar root finding (Brent's method)."""

import math

from ..errors import NoConvergence, NoSignChange, NonFinite

_EPS = 2.220446049250313e-16


def _value(f, x):
    y = float(f(x))
    if not math.isfinite(y):
        raise NonFinite(f"f({x!r}) = {y!r}")
    return y


def find_root_bracketed(f, lo, hi, tol=1e-12, maxiter=200):
    """Find a zero of ``f`` inside ``[lo, hi]``.

    Bisection safeguarded inverse quadratic / secant steps (Brent 1973).
    The returned point ``x`` lies in a final bracket of width at most
    ``tol * max(1, |x|)`` (plus a few ulps).

    Raises
    ------
    NoSignChange
        if ``f(lo)`` and ``f(hi)`` have the same strict sign.
    NonFinite
        if ``f`` returns a NaN or an infinity anywhere along the way.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = float(lo), float(hi)
    fa, fb = _value(f, a), _value(f, b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise NoSignChange(f"f({a!r}) = {fa!r} and f({b!r}) = {fb!r} share a sign")

    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if fb * fc > 0.0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol * max(1.0, abs(b))
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = _value(f, b)
    raise NoConvergence(f"no convergence after {maxiter} iterations; bracket [{b!r}, {c!r}]")


def expand_bracket(f, lo, hi, limit=1e6, factor=2.0):
    """Grow ``hi`` geometrically until ``f`` changes sign on ``[lo, hi]``.

    Returns the new ``hi``. Raises ``NoSignChange`` once ``hi`` passes ``limit``.
    """
    flo = _value(f, lo)
    if flo == 0.0:
        return hi
    while True:
        fhi = _value(f, hi)
        if flo * fhi <= 0.0:
            return hi
        if hi >= limit:
            raise NoSignChange(f"no sign change on [{lo!r}, {limit!r}]")
        hi = min(hi * factor, limit)
