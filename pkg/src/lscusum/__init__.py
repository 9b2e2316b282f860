"""Change-point tests for integrated parameters of locally stationary series.

The pipeline: lift the raw series into moment space, smooth it with a
one-sided rolling mean, accumulate the linearized partial sums of a
smooth functional of those moments, and compare the bridged path
against its Gaussian multiplier bootstrap.
"""

from .bootstrap import (BootstrapDraws, bootstrap_cusum_stats, multiplier_path,
                        p_value, quantile)
from .cusum import TestReport, cusum_process, cusum_statistic, run_test
from .errors import (ConfigInfeasible, DomainGuardViolation, InvalidBandwidth,
                     InvalidGamma, InvalidLevel, InvalidOffset, InvalidShape,
                     LsCusumError, NonPositivePrice, ParseError, SchemaMismatch,
                     SeriesTooShort, ShapeMismatch, UnstableCoefficient)
from .estimator import (EstimatorConfig, StepProcess, block_sums,
                        linearized_integrated, plugin_integrated, variance_process)
from .functionals import (LiftedSeries, ParameterFunctional, RawSeries,
                          autocorrelation_functional,
                          coefficient_of_variation_functional, get_functional,
                          kurtosis_functional, mean_functional,
                          regression_functional, skewness_functional,
                          variance_functional)
from .ingest import (PriceSeries, arctan_transform, log_returns, read_table,
                     select_column, write_table)
from .montecarlo import (McScenario, estimator_error_cell, integrated_target,
                         ks_uniform, local_alternative_scenario,
                         pvalue_histogram, replicate_pvalues, size_power_cell)
from .rng import derive_seed, substream
from .simulate import (RegressionSpec, TvarSpec, TvvarSpec, ar_companion,
                       regression_scenario, simulate_regression, simulate_tvar,
                       simulate_tvvar, stability_check, symmetrized_gamma_draw,
                       tvar_scenario)
from .smoothing import (PilotTrajectory, cv_bandwidth, default_bandwidth_grid,
                        nw_pilot, pilot_mse)

__version__ = "0.1.0"

__all__ = [
    "BootstrapDraws", "ConfigInfeasible", "DomainGuardViolation",
    "EstimatorConfig", "InvalidBandwidth", "InvalidGamma", "InvalidLevel",
    "InvalidOffset", "InvalidShape", "LiftedSeries", "LsCusumError",
    "McScenario", "NonPositivePrice", "ParameterFunctional", "ParseError",
    "PilotTrajectory", "PriceSeries", "RawSeries", "RegressionSpec",
    "SchemaMismatch", "SeriesTooShort", "ShapeMismatch", "StepProcess",
    "TestReport", "TvarSpec", "TvvarSpec", "UnstableCoefficient",
    "ar_companion", "arctan_transform", "autocorrelation_functional",
    "block_sums", "bootstrap_cusum_stats", "coefficient_of_variation_functional",
    "cusum_process", "cusum_statistic", "cv_bandwidth", "default_bandwidth_grid",
    "derive_seed", "estimator_error_cell", "get_functional", "integrated_target",
    "ks_uniform", "kurtosis_functional", "linearized_integrated",
    "local_alternative_scenario", "log_returns", "mean_functional",
    "multiplier_path", "nw_pilot", "p_value", "pilot_mse", "plugin_integrated",
    "pvalue_histogram", "quantile", "read_table", "regression_functional",
    "regression_scenario", "replicate_pvalues", "run_test",
    "select_column", "simulate_regression", "simulate_tvar", "simulate_tvvar",
    "size_power_cell", "skewness_functional", "stability_check", "substream",
    "symmetrized_gamma_draw", "tvar_scenario", "variance_functional",
    "variance_process", "write_table",
]
