from .quadrature import QuadratureResult, integrate_adaptive, integrate_intervals, integrate_pieces, truncation_point
from .rng import RngStream, sample_beta, sample_gamma, sample_gaussian, substream
from .roots import expand_bracket, find_root_bracketed
from .special import (
    log_gamma,
    log_reg_inc_beta,
    log_reg_inc_gamma_P,
    reg_inc_beta,
    reg_inc_gamma_P,
    reg_inc_gamma_Q,
)

__all__ = [
    "QuadratureResult",
    "RngStream",
    "expand_bracket",
    "find_root_bracketed",
    "integrate_adaptive",
    "integrate_intervals",
    "integrate_pieces",
    "log_gamma",
    "log_reg_inc_beta",
    "log_reg_inc_gamma_P",
    "reg_inc_beta",
    "reg_inc_gamma_P",
    "reg_inc_gamma_Q",
    "sample_beta",
    "sample_gamma",
    "sample_gaussian",
    "substream",
    "truncation_point",
]
