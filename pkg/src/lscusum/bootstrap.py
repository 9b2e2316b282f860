"""Gaussian multiplier bootstrap for the CUSUM statistic.

Each draw rescales the precomputed block sums by fresh iid standard
normal multipliers; conditionally on the data the resulting process
mimics the Gaussian limit of the linearized estimator, so the sup of
its bridged version approximates the null law of the test statistic.
Draws are independent and individually replayable: draw i uses the
sub-stream (seed, multiplier-stream, i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accumulate import compensated_cumsum
from .errors import InvalidLevel
from .estimator import EstimatorConfig, StepProcess
from .rng import STREAM_MULTIPLIERS, substream

WEIGHTINGS = ("adjusted", "literal")


@dataclass(frozen=True)
class BootstrapDraws:
    """Sorted sample of bootstrap statistics plus the seed that made it."""

    stats: np.ndarray
    seed: int

    def __post_init__(self):
        arr = np.asarray(self.stats, dtype=float)
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise ValueError("need at least one bootstrap draw")
        if not np.all(np.isfinite(arr)):
            raise ValueError("bootstrap statistics must be finite")
        object.__setattr__(self, "stats", np.sort(arr))

    @property
    def n_draws(self) -> int:
        return self.stats.shape[0]


def _bridge_weights(m: int, u_n: float, weighting: str) -> np.ndarray:
    """Per-grid-index weight w(t/m) multiplying the endpoint value.

    "adjusted" uses the same ramp as the observed CUSUM, zero below u_n
    and linear up to 1; "literal" uses w(u) = u.
    """
    u = np.arange(m + 1) / m
    if weighting == "adjusted":
        return np.clip((u - u_n) / (1.0 - u_n), 0.0, None)
    if weighting == "literal":
        return u
    raise ValueError(f"unknown weighting '{weighting}'; expected one of {WEIGHTINGS}")


def multiplier_path(sums: np.ndarray, cfg: EstimatorConfig, m: int,
                    rng: np.random.Generator) -> StepProcess:
    """One bootstrap process: cumulative multiplier-weighted block sums.

    Value at grid index j is (1/sqrt(m)) sum of xi_t B_t over block
    starts t <= j - block_len; zero before the first complete block.
    """
    xi = rng.standard_normal(sums.shape[0])
    out = np.zeros(m + 1)
    out[cfg.start_index() + cfg.block_len:] = compensated_cumsum(xi * sums) / math.sqrt(m)
    return StepProcess(out)


def bootstrap_cusum_stats(sums: np.ndarray, cfg: EstimatorConfig, m: int,
                          n_draws: int, seed: int,
                          weighting: str = "adjusted") -> BootstrapDraws:
    """Sample the bootstrap null distribution of the CUSUM statistic.

    Each draw is max over the full grid of |path(u) - w(u) path(1)|.
    The result is sorted, so any draw order (including a concurrent
    one) yields the same quantiles.
    """
    if n_draws < 1:
        raise ValueError("need at least one bootstrap draw")
    weights = _bridge_weights(m, cfg.start_fraction(m), weighting)
    stats = np.empty(n_draws)
    for i in range(n_draws):
        path = multiplier_path(sums, cfg, m, substream(seed, STREAM_MULTIPLIERS, i))
        stats[i] = np.max(np.abs(path.values - weights * path.values[-1]))
    return BootstrapDraws(stats, seed)


def quantile(draws: BootstrapDraws, level: float) -> float:
    """Empirical level-quantile: the ceil(level * M)-th order statistic."""
    if not 0.0 < level < 1.0:
        raise InvalidLevel(f"quantile level must lie in (0, 1), got {level}")
    k = math.ceil(level * draws.n_draws - 1e-9)
    return float(draws.stats[max(k, 1) - 1])


def p_value(draws: BootstrapDraws, observed: float) -> float:
    """Randomization p-value (1 + #{draws >= observed}) / (M + 1); never 0."""
    exceed = int(np.count_nonzero(draws.stats >= observed))
    return (1 + exceed) / (draws.n_draws + 1)
