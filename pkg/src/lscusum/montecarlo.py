"""Monte Carlo harness: size/power tables, estimator error, p-value histograms.

Scenarios pair a data model (tvAR with the lag-1 autocorrelation
functional, or the time-varying regression with one coefficient
coordinate) with a hypothesis label selecting the design functions.
Replicate r of a run draws every random input from sub-streams of
(master_seed, replicate-stream, r), so cells reproduce bit-identically
regardless of execution order.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from .cusum import run_test
from .errors import UnstableCoefficient
from .estimator import EstimatorConfig, linearized_integrated, plugin_integrated
from .functionals import RawSeries, get_functional
from .rng import STREAM_REPLICATES, derive_seed
from .simulate import (STABILITY_GRID, regression_scenario, simulate_regression,
                       simulate_tvar, tvar_scenario)
from .smoothing import cv_bandwidth, default_bandwidth_grid, nw_pilot

MODELS = ("tvar-autocorr", "regression-coef")
HYPOTHESES = ("h0", "h1", "h2", "local")

# Closed forms of the integrated lag-1 autocorrelation under each design.
AUTOCORR_TARGETS = {"h0": 0.2, "h1": 0.45, "h2": 0.2 + 1.0 / 30.0}


@dataclass(frozen=True)
class McScenario:
    """One simulation cell: model, hypothesis, and run constants."""

    model: str
    hypothesis: str
    n: int
    reps: int = 500
    boot_m: int = 200
    c: float = 0.1
    levels: Sequence[float] = (0.05, 0.10)
    master_seed: int = 0
    coefficient: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model '{self.model}'; expected one of {MODELS}")
        if self.hypothesis not in HYPOTHESES:
            raise ValueError(
                f"unknown hypothesis '{self.hypothesis}'; expected one of {HYPOTHESES}"
            )
        if self.reps < 1 or self.boot_m < 1:
            raise ValueError("reps and boot_m must be >= 1")
        if self.hypothesis == "local" and self.coefficient is None:
            raise ValueError("hypothesis 'local' needs an explicit coefficient function")

    @property
    def functional(self) -> str:
        return "autocorr:1" if self.model == "tvar-autocorr" else "regression:1"

    def replicate_seed(self, rep: int) -> int:
        return derive_seed(self.master_seed, STREAM_REPLICATES, rep)

    def simulate(self, rep: int) -> RawSeries:
        """Draw replicate rep's raw series (response-first for regression)."""
        seed = self.replicate_seed(rep)
        if self.model == "tvar-autocorr":
            spec = tvar_scenario("h0" if self.hypothesis == "local" else self.hypothesis,
                                 self.n, a=self.coefficient)
            return simulate_tvar(spec, seed)
        spec = regression_scenario(self.hypothesis, self.n)
        response, covariates = simulate_regression(spec, seed)
        return RawSeries(np.column_stack([response.data, covariates.data]))


def _attach_replicate(err: Exception, rep: int) -> None:
    if hasattr(err, "add_note"):
        err.add_note(f"in Monte Carlo replicate {rep}")


def _progress(label: str, done: int, total: int, show: bool) -> None:
    if show and (done == total or done % 25 == 0):
        print(f"  {label}: {done}/{total}", file=sys.stderr, flush=True)


def replicate_pvalues(scenario: McScenario, progress: bool = False) -> np.ndarray:
    """p-values of the change-point test across all replicates."""
    out = np.empty(scenario.reps)
    for rep in range(scenario.reps):
        try:
            report = run_test(scenario.simulate(rep), scenario.functional,
                              seed=scenario.replicate_seed(rep),
                              lag_factor=scenario.c, boot_m=scenario.boot_m,
                              levels=scenario.levels)
        except Exception as err:
            _attach_replicate(err, rep)
            raise
        out[rep] = report.p_value
        _progress(f"{scenario.model}/{scenario.hypothesis} n={scenario.n}",
                  rep + 1, scenario.reps, progress)
    return out


def size_power_cell(scenario: McScenario, progress: bool = False) -> dict:
    """Rejection rate per nominal level plus the mean per-replicate runtime."""
    start = time.perf_counter()
    pvals = replicate_pvalues(scenario, progress)
    elapsed = time.perf_counter() - start
    rates = {float(lvl): float(np.mean(pvals <= lvl)) for lvl in scenario.levels}
    return {"rates": rates, "mean_runtime": elapsed / scenario.reps}


def integrated_target(scenario: McScenario) -> float:
    """Closed-form integral of the lag-1 autocorrelation design."""
    if scenario.model != "tvar-autocorr":
        raise ValueError("estimator error targets exist for the tvAR model only")
    if scenario.hypothesis == "local":
        grid = np.linspace(0.0, 1.0, STABILITY_GRID)
        vals = np.array([scenario.coefficient(u) for u in grid])
        dx = grid[1] - grid[0]
        return float(dx * (vals.sum() - 0.5 * (vals[0] + vals[-1])))
    return AUTOCORR_TARGETS[scenario.hypothesis]


def _estimates_at_one(raw: RawSeries, functional_name: str, c: float):
    """(linearized, plug-in) estimates of the integrated parameter at u=1."""
    functional = get_functional(functional_name, d_raw=raw.d_raw)
    y = functional.lift(raw)
    lag = EstimatorConfig.default_lag(y.m, c)
    bandwidth = cv_bandwidth(y, lag, default_bandwidth_grid(y.m))
    cfg = EstimatorConfig.with_defaults(y.m, bandwidth=bandwidth, lag=lag, lag_factor=c)
    pilot = nw_pilot(y, bandwidth)
    mn = linearized_integrated(y, functional, pilot, cfg)
    plugin = plugin_integrated(y, functional, pilot, cfg)
    return float(mn.values[-1]), float(plugin.values[-1])


def estimator_error_cell(scenario: McScenario, progress: bool = False) -> dict:
    """Mean absolute error and bias of both end-point estimators."""
    target = integrated_target(scenario)
    linearized = np.empty(scenario.reps)
    plugin = np.empty(scenario.reps)
    for rep in range(scenario.reps):
        try:
            linearized[rep], plugin[rep] = _estimates_at_one(
                scenario.simulate(rep), scenario.functional, scenario.c)
        except Exception as err:
            _attach_replicate(err, rep)
            raise
        _progress(f"error/{scenario.hypothesis} n={scenario.n}",
                  rep + 1, scenario.reps, progress)
    return {
        "target": target,
        "linearized": {"mae": float(np.mean(np.abs(linearized - target))),
                       "bias": float(np.mean(linearized - target))},
        "plugin": {"mae": float(np.mean(np.abs(plugin - target))),
                   "bias": float(np.mean(plugin - target))},
    }


def ks_uniform(sample: np.ndarray) -> float:
    """Kolmogorov-Smirnov sup-distance of a sample from Uniform(0,1)."""
    p = np.sort(np.asarray(sample, dtype=float))
    n = p.shape[0]
    upper = np.arange(1, n + 1) / n - p
    lower = p - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def pvalue_histogram(scenario: McScenario, progress: bool = False):
    """Null p-values plus their KS distance from uniform; hypothesis must be h0."""
    if scenario.hypothesis != "h0":
        raise ValueError("p-value uniformity is a null property; use hypothesis 'h0'")
    pvals = replicate_pvalues(scenario, progress)
    return pvals, ks_uniform(pvals)


def local_alternative_scenario(base: float, drift: Callable[[float], float], n: int,
                               reps: int = 500, boot_m: int = 200, c: float = 0.1,
                               levels: Sequence[float] = (0.05, 0.10),
                               master_seed: int = 0) -> McScenario:
    """tvAR scenario with coefficient base + drift(u)/sqrt(n).

    The drift enters at the root-n scale, so power against it settles
    between size and one as n grows. Raises UnstableCoefficient when the
    drifted coefficient leaves (-1, 1).
    """
    scale = 1.0 / math.sqrt(n)

    def coefficient(u, _base=float(base), _scale=scale):
        return _base + _scale * drift(u)

    grid = np.linspace(0.0, 1.0, STABILITY_GRID)
    worst = max(abs(coefficient(u)) for u in grid)
    if worst >= 1.0:
        raise UnstableCoefficient(
            f"drifted coefficient reaches |a| = {worst:.4f} >= 1 at n = {n}"
        )
    return McScenario(model="tvar-autocorr", hypothesis="local", n=n, reps=reps,
                      boot_m=boot_m, c=c, levels=levels, master_seed=master_seed,
                      coefficient=coefficient)
