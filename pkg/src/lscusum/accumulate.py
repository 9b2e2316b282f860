"""Drift-bounded cumulative sums shared by the smoothing and estimation passes."""

from __future__ import annotations

import numpy as np

BLOCK = 4096


def compensated_cumsum(x: np.ndarray) -> np.ndarray:
    """Cumulative sum along axis 0 with error-recycled block accumulation.

    Within each block of BLOCK rows a plain cumsum runs; block totals are
    carried across blocks with Kahan compensation, so rounding drift stays
    bounded by the block length instead of growing with the series.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    tail_shape = x.shape[1:]
    carry = np.zeros(tail_shape)
    comp = np.zeros(tail_shape)
    for start in range(0, x.shape[0], BLOCK):
        block = x[start:start + BLOCK]
        out[start:start + BLOCK] = np.cumsum(block, axis=0) + carry
        total = block.sum(axis=0)
        fresh = total - comp
        updated = carry + fresh
        comp = (updated - carry) - fresh
        carry = updated
    return out
