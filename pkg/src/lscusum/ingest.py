"""CSV input/output and the price-to-returns pipeline.

Tables are plain header-row CSVs of decimal reals, comma separated,
UTF-8. Values are written with 17 significant digits so a write/read
round trip reproduces every float bit-for-bit. Rows with missing or
non-numeric cells are rejected outright; silently imputing would change
any downstream test.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (InvalidGamma, NonPositivePrice, ParseError, SchemaMismatch,
                     SeriesTooShort, ShapeMismatch)
from .functionals import RawSeries


@dataclass(frozen=True)
class PriceSeries:
    """Strictly positive price path, optionally with monotone timestamps."""

    prices: np.ndarray
    timestamps: Optional[np.ndarray] = None

    def __post_init__(self):
        arr = np.asarray(self.prices, dtype=float).reshape(-1)
        bad = np.where(~(arr > 0.0) | ~np.isfinite(arr))[0]
        if bad.size:
            raise NonPositivePrice("prices must be positive reals", index=int(bad[0]))
        object.__setattr__(self, "prices", arr)
        if self.timestamps is not None:
            ts = np.asarray(self.timestamps, dtype=float).reshape(-1)
            if ts.shape[0] != arr.shape[0]:
                raise ShapeMismatch("timestamps and prices differ in length")
            if np.any(np.diff(ts) < 0):
                raise ShapeMismatch("timestamps must be nondecreasing")
            object.__setattr__(self, "timestamps", ts)

    @property
    def n(self) -> int:
        return self.prices.shape[0]


def log_returns(p: PriceSeries) -> RawSeries:
    """First differences of log prices; length n-1."""
    if p.n < 2:
        raise SeriesTooShort("need at least two prices for returns")
    return RawSeries(np.diff(np.log(p.prices)))


def arctan_transform(d: RawSeries, gamma: float) -> RawSeries:
    """Elementwise arctan(d / gamma); bounded, odd, order-preserving.

    Compresses heavy-tailed returns so that all moments exist; gamma
    sets the scale below which the map is nearly linear.
    """
    if not (isinstance(gamma, (int, float)) and math.isfinite(gamma) and gamma > 0):
        raise InvalidGamma(f"gamma must be a positive real, got {gamma!r}")
    return RawSeries(np.arctan(d.data / gamma))


def read_table(path) -> tuple:
    """Read a header-row CSV of floats; returns (columns, n x k array)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            columns = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{path}: empty file") from None
        columns = [c.strip() for c in columns]
        if not any(columns):
            raise SchemaMismatch(f"{path}: blank header row")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(columns):
                raise ParseError(
                    f"{path}: expected {len(columns)} fields, got {len(row)}", line=lineno
                )
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                raise ParseError(f"{path}: non-numeric cell", line=lineno) from None
        if not rows:
            raise SchemaMismatch(f"{path}: no data rows")
    return columns, np.array(rows)


def write_table(path, columns: Sequence[str], data: np.ndarray) -> None:
    """Write a header-row CSV; floats carry 17 significant digits."""
    arr = np.atleast_2d(np.asarray(data, dtype=float))
    if arr.shape[0] == 1 and len(columns) == 1 and arr.shape[1] > 1:
        arr = arr.T
    if arr.shape[1] != len(columns):
        raise ShapeMismatch(
            f"{len(columns)} column names for data with {arr.shape[1]} columns"
        )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in arr:
            writer.writerow([f"{v:.17g}" for v in row])


def column_index(columns: Sequence[str], key: str, width: int) -> int:
    """Resolve a header name or 0-based integer index to a column index."""
    key = key.strip()
    if key in columns:
        return columns.index(key)
    try:
        idx = int(key)
    except ValueError:
        raise SchemaMismatch(f"no column named '{key}' (have {list(columns)})") from None
    if not 0 <= idx < width:
        raise SchemaMismatch(f"column index {idx} outside 0..{width - 1}")
    return idx


def select_column(columns: Sequence[str], data: np.ndarray, key: str) -> np.ndarray:
    """Pick one column by header name or 0-based integer index."""
    return data[:, column_index(columns, key, data.shape[1])]
