"""One-sided local-average pilot estimator and cross-validated bandwidth."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accumulate import compensated_cumsum
from .errors import InvalidBandwidth, SeriesTooShort, ShapeMismatch
from .functionals import LiftedSeries


@dataclass(frozen=True)
class PilotTrajectory:
    """One-sided local means; row t uses only lifted rows 1..t (a filter)."""

    mu_hat: np.ndarray
    bandwidth: int
    tau: int

    @property
    def m(self) -> int:
        return self.mu_hat.shape[0]


def _window_means(data: np.ndarray, k: int, prefix: np.ndarray = None) -> np.ndarray:
    # prefix[t] = sum of rows 1..t, prefix[0] = 0
    if prefix is None:
        prefix = np.vstack([np.zeros((1, data.shape[1])), compensated_cumsum(data)])
    m = data.shape[0]
    counts = np.minimum(np.arange(1, m + 1), k)
    lows = np.maximum(np.arange(1, m + 1) - k, 0)
    return (prefix[1:] - prefix[lows]) / counts[:, None]


def nw_pilot(y: LiftedSeries, k: int) -> PilotTrajectory:
    """Trailing mean of the most recent min(k, t) lifted rows, for every t.

    Runs on block-compensated running sums in O(m d). The offset field
    defaults to the bandwidth, the natural choice.
    """
    if k < 1 or k > y.m:
        raise InvalidBandwidth(f"bandwidth {k} outside 1..{y.m}")
    return PilotTrajectory(mu_hat=_window_means(y.data, k), bandwidth=k, tau=k)


def default_bandwidth_grid(m: int, size: int = 25) -> list[int]:
    """Geometrically spaced integer bandwidths in [m^0.35, m^0.75], deduplicated."""
    lo = max(1, math.ceil(m ** 0.35))
    hi = min(m, max(lo, math.floor(m ** 0.75)))
    grid = np.geomspace(lo, hi, size)
    return sorted(set(int(round(g)) for g in grid))


def cv_bandwidth(y: LiftedSeries, L: int, k_grid) -> int:
    """Bandwidth minimizing the lag-L prediction error of the pilot.

    The objective sums the squared distances between the pilot at t and
    the lifted row at t+L over t = 1..m-L. Ties resolve to the smaller
    bandwidth.
    """
    if L < 1:
        raise ValueError("prediction lag must be >= 1")
    if y.m <= L:
        raise SeriesTooShort(f"need more than L={L} lifted rows, got {y.m}")
    ks = sorted(set(int(k) for k in k_grid))
    if not ks:
        raise ValueError("empty bandwidth grid")
    for k in ks:
        if k < 1 or k > y.m:
            raise InvalidBandwidth(f"bandwidth {k} outside 1..{y.m}")
    data = y.data
    prefix = np.vstack([np.zeros((1, data.shape[1])), compensated_cumsum(data)])
    best_k, best_loss = None, math.inf
    for k in ks:
        mu = _window_means(data, k, prefix)
        resid = mu[:y.m - L] - data[L:]
        loss = float(np.einsum("ij,ij->", resid, resid))
        if loss < best_loss:
            best_k, best_loss = k, loss
    return best_k


def pilot_mse(pilot: PilotTrajectory, mu_true: np.ndarray) -> float:
    """Mean squared deviation (1/m) sum_t ||mu_hat_t - mu_t||^2."""
    mu_true = np.asarray(mu_true, dtype=float)
    if mu_true.ndim == 1:
        mu_true = mu_true[:, None]
    if mu_true.shape != pilot.mu_hat.shape:
        raise ShapeMismatch(
            f"truth shape {mu_true.shape} does not match pilot shape {pilot.mu_hat.shape}"
        )
    diff = pilot.mu_hat - mu_true
    return float(np.mean(np.einsum("ij,ij->i", diff, diff)))
