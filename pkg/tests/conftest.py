"""Shared brute-force oracles and random instance generation.

The naive_* functions re-derive every process from its definition:
summands are computed one index at a time through the single-point
eval_f / grad_f path, then re-summed per grid point with math.fsum.
They are O(m^2) on purpose; the production code must match them, not
the other way round.
"""

import math

import numpy as np

from lscusum import (
    EstimatorConfig,
    RawSeries,
    get_functional,
    nw_pilot,
)


def naive_linearized(y, functional, pilot, cfg):
    """Grid values of the linearized integrated estimator, re-summed."""
    m = y.m
    start = cfg.offset + cfg.lag
    summands = []
    for t in range(start, m + 1):
        mu = pilot.mu_hat[t - cfg.lag - 1]
        grad = functional.grad_f(mu)
        resid = y.data[t - 1] - mu
        correction = math.fsum(float(g) * float(r) for g, r in zip(grad, resid))
        summands.append(functional.eval_f(mu) + correction)
    values = np.zeros(m + 1)
    for j in range(start, m + 1):
        values[j] = math.fsum(summands[: j - start + 1]) / m
    return values


def naive_plugin(y, functional, pilot, cfg):
    """Grid values of the plug-in partial sum, re-summed."""
    m = y.m
    summands = [functional.eval_f(pilot.mu_hat[t - 1]) for t in range(cfg.offset, m + 1)]
    values = np.zeros(m + 1)
    for j in range(cfg.offset, m + 1):
        values[j] = math.fsum(summands[: j - cfg.offset + 1]) / m
    return values


def naive_block_sums(y, functional, pilot, cfg):
    """Projected block sums, one explicit inner sum per block."""
    m, b = y.m, cfg.block_len
    start = cfg.offset + cfg.lag
    out = []
    for t in range(start, m - b + 1):
        mu = pilot.mu_hat[t - cfg.lag - 1]
        grad = functional.grad_f(mu)
        block = [
            math.fsum(float(y.data[t + i - 1, j]) for i in range(1, b + 1)) - b * float(mu[j])
            for j in range(y.d)
        ]
        out.append(math.fsum(float(g) * v for g, v in zip(grad, block)) / math.sqrt(b))
    return np.array(out)


def naive_variance(y, functional, pilot, cfg):
    """Grid values of the cumulative squared-block-sum process."""
    m, b = y.m, cfg.block_len
    start = cfg.offset + cfg.lag
    sums = naive_block_sums(y, functional, pilot, cfg)
    values = np.zeros(m + 1)
    for j in range(start + b, m + 1):
        values[j] = math.fsum(float(s) ** 2 for s in sums[: j - b - start + 1]) / m
    return values


def naive_cusum(mn_values, u_n):
    """Bridged path M(u) - w(u) M(1) evaluated pointwise on the grid."""
    m = mn_values.shape[0] - 1
    end = mn_values[m]
    out = np.empty(m + 1)
    for j in range(m + 1):
        w = max(0.0, (j / m - u_n) / (1.0 - u_n))
        out[j] = mn_values[j] - w * end
    return out


def naive_statistic(tn_values, first_grid_index):
    """sup |T| over grid indices >= first_grid_index."""
    return max(abs(float(v)) for v in tn_values[first_grid_index:])


def naive_multiplier_path(sums, cfg, m, xi):
    """Cumulative multiplier-weighted block sums, re-summed per grid point."""
    first = cfg.offset + cfg.lag + cfg.block_len
    values = np.zeros(m + 1)
    for j in range(first, m + 1):
        values[j] = math.fsum(
            float(x) * float(s) for x, s in zip(xi[: j - first + 1], sums[: j - first + 1])
        ) / math.sqrt(m)
    return values


FUNCTIONAL_POOL = (
    "mean",
    "variance",
    "autocorr:1",
    "autocorr:2",
    "kurtosis",
    "skewness",
    "cv",
    "regression:1",
    "regression:2",
)


def random_instance(rng, index):
    """One random (raw, functional, lifted, pilot, cfg) oracle test case.

    Cycles through the functional pool so each instance batch covers
    every built-in. Bandwidth, lag, offset, and block length vary; the
    offset never dips below the bandwidth, which keeps degenerate early
    pilot windows out of every summation range.
    """
    name = FUNCTIONAL_POOL[index % len(FUNCTIONAL_POOL)]
    n = int(rng.integers(100, 201))
    # Bandwidths stay >= 10 so every pilot window is well conditioned;
    # higher-moment gradients blow up on near-degenerate windows and
    # would spoil an absolute comparison at 1e-10.
    k = int(rng.integers(10, 19))
    if name.startswith("regression"):
        w = rng.standard_normal((n, 2)) @ np.array([[1.0, 0.3], [0.0, 0.8]])
        z = w @ np.array([1.0, -0.5]) + 0.5 * rng.standard_normal(n)
        raw = RawSeries(np.column_stack([z, w]))
    elif name == "cv":
        raw = RawSeries(4.0 + 0.5 * rng.standard_normal(n))
    else:
        raw = RawSeries(rng.standard_normal(n) * 1.3)
    functional = get_functional(name, d_raw=raw.d_raw)
    y = functional.lift(raw)
    cfg = EstimatorConfig(
        lag=int(rng.integers(1, 4)),
        offset=k + int(rng.integers(0, 3)),
        block_len=int(rng.integers(1, 6)),
        bandwidth=k,
    )
    cfg.validate(y.m, need_blocks=True)
    return raw, functional, y, nw_pilot(y, k), cfg
