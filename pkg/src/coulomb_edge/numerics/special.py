"""Log-gamma and regularized incomplete gamma / beta functions.

Thin, domain-checked wrappers over ``scipy.special`` (Cephes / Boost
backends), vectorized over their arguments.
"""

import numpy as np
from scipy import special as _sp

from ..errors import DomainError


def _check(cond, message):
    if not np.all(cond):
        raise DomainError(message)


def log_gamma(x):
    x = np.asarray(x, dtype=float)
    _check(x > 0, "log_gamma needs x > 0")
    return _sp.gammaln(x)[()]


def reg_inc_gamma_P(a, x):
    """Lower regularized incomplete gamma ``P(a, x)``: the Gamma(a, 1) CDF at x."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    _check(a > 0, "reg_inc_gamma_P needs a > 0")
    _check(x >= 0, "reg_inc_gamma_P needs x >= 0")
    return _sp.gammainc(a, x)[()]


def reg_inc_gamma_Q(a, x):
    """Upper tail ``Q(a, x) = 1 - P(a, x)``, accurate where P is close to 1."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    _check(a > 0, "reg_inc_gamma_Q needs a > 0")
    _check(x >= 0, "reg_inc_gamma_Q needs x >= 0")
    return _sp.gammaincc(a, x)[()]


def reg_inc_beta(a, b, x):
    """Regularized incomplete beta ``I_x(a, b)``: the Beta(a, b) CDF at x."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    _check((a > 0) & (b > 0), "reg_inc_beta needs a, b > 0")
    _check((x >= 0) & (x <= 1), "reg_inc_beta needs 0 <= x <= 1")
    return _sp.betainc(a, b, x)[()]


def log_reg_inc_gamma_P(a, x):
    """``log P(a, x)`` without cancellation on either side of the median."""
    p = reg_inc_gamma_P(a, x)
    q = reg_inc_gamma_Q(a, x)
    with np.errstate(divide="ignore"):
        return np.where(p < 0.5, np.log(p), np.log1p(-q))[()]


def log_reg_inc_beta(a, b, x):
    """``log I_x(a, b)`` using the reflection ``I_x(a, b) = 1 - I_{1-x}(b, a)`` near 1."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.asarray(x, dtype=float)
    p = reg_inc_beta(a, b, x)
    q = reg_inc_beta(b, a, 1.0 - x)
    with np.errstate(divide="ignore"):
        return np.where(p < 0.5, np.log(p), np.log1p(-q))[()]
