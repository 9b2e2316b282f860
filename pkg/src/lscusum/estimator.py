"""Integrated-parameter estimators and the block-sum variance process.

Everything here works on the lifted series; its length m plays the role
of the sample size, and all processes live on the grid u = t/m,
t = 0..m. The linearized estimator sums, from t = offset+lag on, the
pilot value of the parameter plus a first-order correction evaluated at
the lag-delayed pilot; delaying the pilot decouples it from the
observation and removes the first-order smoothing bias of the plain
plug-in sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .accumulate import compensated_cumsum
from .errors import ConfigInfeasible, DomainGuardViolation
from .functionals import LiftedSeries, ParameterFunctional
from .smoothing import PilotTrajectory


@dataclass(frozen=True)
class StepProcess:
    """Right-continuous step function on [0,1] with jumps at t/n.

    values[t] is the level on [t/n, (t+1)/n); values[n] is the value
    at u = 1.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.shape[0] < 2:
            raise ValueError("a step process needs at least the grid {0, 1}")
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0] - 1

    def grid(self) -> np.ndarray:
        return np.arange(self.n + 1) / self.n

    def at(self, u: float) -> float:
        """Value at u, i.e. values[floor(n u)] (clipped to the grid)."""
        j = int(math.floor(self.n * u + 1e-9))
        return float(self.values[min(max(j, 0), self.n)])

    def sup_abs(self, from_u: float = 0.0) -> float:
        """max |values[t]| over grid indices t >= ceil(n from_u)."""
        start = int(math.ceil(self.n * from_u - 1e-9))
        start = min(max(start, 0), self.n)
        return float(np.max(np.abs(self.values[start:])))


@dataclass(frozen=True)
class EstimatorConfig:
    """Tuning constants of one estimation pass.

    lag decouples pilot from observation, offset is the first pilot
    index trusted (defaults to the bandwidth), block_len is the block
    length of the variance process, bandwidth the pilot window width.
    lag_factor records the constant c behind lag = ceil(c log(m)^2)
    when the lag was derived rather than given.
    """

    lag: int
    offset: int
    block_len: int
    bandwidth: int
    lag_factor: Optional[float] = None

    @staticmethod
    def default_lag(m: int, lag_factor: float = 0.1) -> int:
        return max(1, math.ceil(lag_factor * math.log(m) ** 2))

    @classmethod
    def with_defaults(cls, m: int, bandwidth: int, lag: Optional[int] = None,
                      offset: Optional[int] = None, block_len: Optional[int] = None,
                      lag_factor: float = 0.1) -> "EstimatorConfig":
        lag = lag if lag is not None else cls.default_lag(m, lag_factor)
        return cls(
            lag=lag,
            offset=offset if offset is not None else bandwidth,
            block_len=block_len if block_len is not None else lag,
            bandwidth=bandwidth,
            lag_factor=lag_factor,
        )

    def start_index(self) -> int:
        """First summand index of the linearized estimator."""
        return self.offset + self.lag

    def start_fraction(self, m: int) -> float:
        """Grid fraction u below which the estimator is identically zero."""
        return (self.offset + self.lag - 1) / m

    def validate(self, m: int, need_blocks: bool = False) -> None:
        if self.lag < 1 or self.offset < 1 or self.block_len < 1 or self.bandwidth < 1:
            raise ConfigInfeasible("lag, offset, block length, bandwidth must all be >= 1")
        if self.start_index() >= m:
            raise ConfigInfeasible(
                f"offset+lag = {self.start_index()} leaves no summands for m = {m}"
            )
        if need_blocks and self.start_index() + self.block_len >= m:
            raise ConfigInfeasible(
                f"offset+lag+block = {self.start_index() + self.block_len} "
                f"leaves no complete block for m = {m}"
            )


def _guarded_pilot_rows(functional: ParameterFunctional, pilot: PilotTrajectory,
                        first_row: int, last_row: int, first_summand: int) -> np.ndarray:
    """Pilot rows first_row..last_row (1-based), guard-checked.

    A guard failure reports the summand index t of the first violation.
    """
    rows = pilot.mu_hat[first_row - 1:last_row]
    ok = functional.guard_batch(rows)
    if not np.all(ok):
        bad = int(np.argmax(~ok))
        raise DomainGuardViolation(
            f"pilot estimate outside the domain of '{functional.name}'",
            index=first_summand + bad,
        )
    return rows


def linearized_integrated(y: LiftedSeries, functional: ParameterFunctional,
                          pilot: PilotTrajectory, cfg: EstimatorConfig) -> StepProcess:
    """Linearized partial-sum estimator of the integrated parameter.

    On the grid j = floor(m u), sums f(pilot_{t-lag}) plus the gradient
    correction grad f(pilot_{t-lag}) . (y_t - pilot_{t-lag}) over
    t = offset+lag .. j, divided by m; zero below the start index.
    """
    m = y.m
    cfg.validate(m)
    start = cfg.start_index()
    rows = _guarded_pilot_rows(functional, pilot, cfg.offset, m - cfg.lag, start)
    values_f = functional.f_batch(rows)
    grads = functional.grad_batch(rows)
    resid = y.data[start - 1:m] - rows
    summand = values_f + np.einsum("ij,ij->i", grads, resid)
    out = np.zeros(m + 1)
    out[start:] = compensated_cumsum(summand) / m
    return StepProcess(out)


def plugin_integrated(y: LiftedSeries, functional: ParameterFunctional,
                      pilot: PilotTrajectory, cfg: EstimatorConfig) -> StepProcess:
    """Plain plug-in partial sum of f(pilot_t) from t = offset on.

    Biased comparator to the linearized estimator; same grid and
    normalization.
    """
    m = y.m
    cfg.validate(m)
    rows = _guarded_pilot_rows(functional, pilot, cfg.offset, m, cfg.offset)
    out = np.zeros(m + 1)
    out[cfg.offset:] = compensated_cumsum(functional.f_batch(rows)) / m
    return StepProcess(out)


def block_sums(y: LiftedSeries, functional: ParameterFunctional,
               pilot: PilotTrajectory, cfg: EstimatorConfig) -> np.ndarray:
    """Normalized projected block sums, one per t = offset+lag .. m-block.

    B_t = grad f(pilot_{t-lag}) . sum_{i=1..block}(y_{t+i} - pilot_{t-lag})
    divided by sqrt(block). Shared kernel of the variance process and the
    multiplier bootstrap.
    """
    m = y.m
    cfg.validate(m, need_blocks=True)
    start, b = cfg.start_index(), cfg.block_len
    last = m - b
    rows = _guarded_pilot_rows(functional, pilot, cfg.offset, last - cfg.lag, start)
    grads = functional.grad_batch(rows)
    prefix = np.vstack([np.zeros((1, y.d)), compensated_cumsum(y.data)])
    t_idx = np.arange(start, last + 1)
    centered = (prefix[t_idx + b] - prefix[t_idx]) - b * rows
    return np.einsum("ij,ij->i", grads, centered) / math.sqrt(b)


def variance_process(y: LiftedSeries, functional: ParameterFunctional,
                     pilot: PilotTrajectory, cfg: EstimatorConfig) -> StepProcess:
    """Cumulative mean of squared block sums; nonnegative, nondecreasing.

    Estimates the integrated long-run variance of the linearized sums;
    grid value at j covers blocks with t <= j - block.
    """
    m = y.m
    sums = block_sums(y, functional, pilot, cfg)
    out = np.zeros(m + 1)
    out[cfg.start_index() + cfg.block_len:] = compensated_cumsum(sums * sums) / m
    return StepProcess(out)
