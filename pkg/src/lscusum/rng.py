"""Deterministic sub-stream derivation from a single 64-bit master seed.

Every source of randomness (innovations, start values, covariates,
bootstrap multipliers, Monte Carlo replicates) draws from its own
`numpy` Generator, seeded by mixing (master_seed, stream id, index...)
through a splitmix64-style avalanche finalizer. Identical ids always
reproduce the identical stream; distinct ids decorrelate.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Stream ids. Keep stable: they are part of the reproducibility contract.
STREAM_INNOVATIONS = 1   # path innovations (tvAR eta_t, tvVAR eps_t, t >= 1)
STREAM_START = 2         # burn-in / stationary-start innovations (t <= 0)
STREAM_COVARIATES = 3    # regression covariate draws
STREAM_MULTIPLIERS = 4   # bootstrap multiplier draws, one sub-id per draw
STREAM_REPLICATES = 5    # Monte Carlo replicates, one sub-id per replicate


def _mix64(x: int) -> int:
    """splitmix64 finalizer; full-avalanche 64-bit permutation."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def derive_seed(master_seed: int, *ids: int) -> int:
    """Mix a master seed with a tuple of stream ids into a fresh 64-bit seed."""
    state = _mix64(master_seed & _MASK64)
    for i in ids:
        state = _mix64(state ^ _mix64(i & _MASK64))
    return state


def substream(master_seed: int, *ids: int) -> np.random.Generator:
    """Independent, replayable Generator for the given (seed, ids) address."""
    return np.random.default_rng(derive_seed(master_seed, *ids))
