"""Homogeneity testing for networks via induced-subgraph sampling.

The package asks one question of an observed network: is a single edge
probability shared by every node pair plausible?  It answers by sampling
induced subgraphs, comparing their edge counts against the exact
hypergeometric null, and reporting a chi-square goodness-of-fit p-value,
either analytic or calibrated against simulated homogeneous networks.
"""

from .dist import (HypergeomNull, chi_square_sf, hypergeom_cdf,
                   hypergeom_pmf, hypergeom_quantile, optimal_subgraph_size)
from .errors import (CalibrationError, EnumerationGuardError, NetgofError,
                     ParameterError, ParseError)
from .experiments import (ExperimentConfig, ExperimentRow,
                          calibrate_two_colour, run_power, run_significance,
                          run_timing, wilson_interval)
from .gof import (BinnedCounts, BinSpec, TestResult, approximation_test,
                  build_bins, chi_square_statistic, empirical_test,
                  exact_edge_count_distribution)
from .graph import (Graph, TwoColourParams, generate_gnm, generate_gnp,
                    generate_two_colour, induced_edge_count, parse_edge_list,
                    sample_subgraph_edge_count, write_edge_list)
from ._kernel import BACKEND as KERNEL_BACKEND

__version__ = "1.0.0"

__all__ = [
    "BinnedCounts",
    "BinSpec",
    "CalibrationError",
    "EnumerationGuardError",
    "ExperimentConfig",
    "ExperimentRow",
    "Graph",
    "HypergeomNull",
    "KERNEL_BACKEND",
    "NetgofError",
    "ParameterError",
    "ParseError",
    "TestResult",
    "TwoColourParams",
    "approximation_test",
    "build_bins",
    "calibrate_two_colour",
    "chi_square_sf",
    "chi_square_statistic",
    "empirical_test",
    "exact_edge_count_distribution",
    "generate_gnm",
    "generate_gnp",
    "generate_two_colour",
    "hypergeom_cdf",
    "hypergeom_pmf",
    "hypergeom_quantile",
    "induced_edge_count",
    "optimal_subgraph_size",
    "parse_edge_list",
    "run_power",
    "run_significance",
    "run_timing",
    "sample_subgraph_edge_count",
    "wilson_interval",
    "write_edge_list",
    "__version__",
]
