"""Extreme moduli of two-dimensional Coulomb gases with radial potentials."""

from .edge import ScalingConstants, general_scaling, gumbel_cdf, power_scaling, scaling_for
from .equilibrium import equilibrium_profile
from .harness import ExperimentConfig, Law, run_bulk_experiment, run_edge_experiment
from .layers import exact_max_cdf, layer_cdf, sample_gas, sample_layer
from .numerics import RngStream, substream
from .potential import Custom, HardWallPareto, LogConfining, Power, Quartic, parse_potential, validate

__all__ = [
    "Custom", "ExperimentConfig", "HardWallPareto", "Law", "LogConfining", "Power", "Quartic",
    "RngStream", "ScalingConstants", "equilibrium_profile", "exact_max_cdf", "general_scaling",
    "gumbel_cdf", "layer_cdf", "parse_potential", "power_scaling", "run_bulk_experiment",
    "run_edge_experiment", "sample_gas", "sample_layer", "scaling_for", "substream", "validate",
]
