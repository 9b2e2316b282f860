"""Parameter functionals: moment lifts, smooth scalar maps, and gradients.

A parameter functional packages three things: a lift h mapping raw
observations (plus lagged values) to a moment vector time series, a
smooth scalar function f of the moment vector, and the gradient of f.
Any parameter expressible as f(first moments of the lifted series) can
be fed to the integrated estimator and the change-point test.

Built-ins: mean, variance, lag-h autocorrelation, kurtosis, skewness,
coefficient of variation, and single coordinates of a linear regression
coefficient vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainGuardViolation, SeriesTooShort, ShapeMismatch

DEFAULT_GUARD_MARGIN = 1e-8


@dataclass(frozen=True)
class RawSeries:
    """Observed series; an n x d_raw array of finite reals, row t at time t/n.

    One-dimensional input is promoted to a single column.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ShapeMismatch("raw series must be a nonempty n x d array")
        if not np.all(np.isfinite(arr)):
            raise ShapeMismatch("raw series contains non-finite entries")
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d_raw(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class LiftedSeries:
    """Moment-lifted series: m x d array, m = n - offset.

    Row t is a deterministic function of raw rows t..t+offset (in raw
    indexing: the first `offset` raw rows are consumed by lags).
    """

    data: np.ndarray
    offset: int

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class ParameterFunctional:
    """A named (lift, f, grad f, domain guard) bundle.

    The private callables operate on batches: `_f` and `_guard` map an
    (N, d) block of moment vectors to length-N arrays, `_grad` to an
    (N, d) array. Public single-point wrappers validate the domain and
    raise :class:`DomainGuardViolation` outside it.
    """

    name: str
    offset: int
    dim: int
    guard_margin: float
    _lift: Callable[[np.ndarray], np.ndarray]
    _f: Callable[[np.ndarray], np.ndarray]
    _grad: Callable[[np.ndarray], np.ndarray]
    _guard: Callable[[np.ndarray], np.ndarray]

    def lift(self, raw: RawSeries) -> LiftedSeries:
        """Expand a raw series into its moment lift.

        Deterministic, no estimation involved. Raises SeriesTooShort if
        the series cannot cover the lag depth.
        """
        if raw.n <= self.offset:
            raise SeriesTooShort(
                f"need more than {self.offset} observations for '{self.name}', got {raw.n}"
            )
        return LiftedSeries(self._lift(raw.data), self.offset)

    def guard(self, mu: np.ndarray) -> bool:
        """True when mu lies in the admissible domain of f."""
        return bool(self._guard(self._as_point(mu)[None, :])[0])

    def eval_f(self, mu: np.ndarray) -> float:
        """Parameter value f(mu) at a single moment vector."""
        point = self._as_point(mu)
        if not self._guard(point[None, :])[0]:
            raise DomainGuardViolation(f"moment vector outside the domain of '{self.name}'")
        return float(self._f(point[None, :])[0])

    def grad_f(self, mu: np.ndarray) -> np.ndarray:
        """Gradient of f at a single moment vector, as a length-d array."""
        point = self._as_point(mu)
        if not self._guard(point[None, :])[0]:
            raise DomainGuardViolation(f"moment vector outside the domain of '{self.name}'")
        return self._grad(point[None, :])[0]

    # Batch entry points used by the estimation passes. No validation
    # here; callers check `guard_batch` and report the failing index.
    def f_batch(self, mu_rows: np.ndarray) -> np.ndarray:
        return self._f(mu_rows)

    def grad_batch(self, mu_rows: np.ndarray) -> np.ndarray:
        return self._grad(mu_rows)

    def guard_batch(self, mu_rows: np.ndarray) -> np.ndarray:
        return self._guard(mu_rows)

    def _as_point(self, mu) -> np.ndarray:
        point = np.asarray(mu, dtype=float).reshape(-1)
        if point.shape[0] != self.dim:
            raise ShapeMismatch(
                f"'{self.name}' expects moment vectors of length {self.dim}, got {point.shape[0]}"
            )
        return point


def _univariate(data: np.ndarray, name: str) -> np.ndarray:
    if data.shape[1] != 1:
        raise ShapeMismatch(f"functional '{name}' expects a univariate series")
    return data[:, 0]


def mean_functional(guard_margin: float = DEFAULT_GUARD_MARGIN) -> ParameterFunctional:
    """Running mean; f is the identity on the single lifted coordinate."""
    return ParameterFunctional(
        name="mean",
        offset=0,
        dim=1,
        guard_margin=guard_margin,
        _lift=lambda x: _univariate(x, "mean")[:, None].copy(),
        _f=lambda mu: mu[:, 0],
        _grad=lambda mu: np.ones_like(mu),
        _guard=lambda mu: np.ones(mu.shape[0], dtype=bool),
    )


def variance_functional(guard_margin: float = DEFAULT_GUARD_MARGIN) -> ParameterFunctional:
    """Marginal variance via the lift (x, x^2) and f(a, b) = b - a^2."""

    def lift(x):
        x = _univariate(x, "variance")
        return np.column_stack([x, x * x])

    def grad(mu):
        out = np.empty_like(mu)
        out[:, 0] = -2.0 * mu[:, 0]
        out[:, 1] = 1.0
        return out

    return ParameterFunctional(
        name="variance",
        offset=0,
        dim=2,
        guard_margin=guard_margin,
        _lift=lift,
        _f=lambda mu: mu[:, 1] - mu[:, 0] ** 2,
        _grad=grad,
        _guard=lambda mu: mu[:, 1] - mu[:, 0] ** 2 > guard_margin,
    )


def autocorrelation_functional(h: int = 1,
                               guard_margin: float = DEFAULT_GUARD_MARGIN) -> ParameterFunctional:
    """Lag-h autocorrelation.

    Lift rows are (x_t, x_{t-h}, x_t^2, x_{t-h}^2, x_t x_{t-h}); the first
    h raw observations are consumed by the lag. f standardizes the lagged
    covariance by both marginal variances, so both must exceed the guard
    margin.
    """
    if h < 1:
        raise ValueError("autocorrelation lag must be >= 1")

    def lift(x):
        x = _univariate(x, "autocorr")
        cur, lag = x[h:], x[:-h]
        return np.column_stack([cur, lag, cur * cur, lag * lag, cur * lag])

    def f(mu):
        v1 = mu[:, 2] - mu[:, 0] ** 2
        v2 = mu[:, 3] - mu[:, 1] ** 2
        return (mu[:, 4] - mu[:, 0] * mu[:, 1]) / np.sqrt(v1 * v2)

    def grad(mu):
        x1, x2 = mu[:, 0], mu[:, 1]
        v1 = mu[:, 2] - x1 ** 2
        v2 = mu[:, 3] - x2 ** 2
        c = mu[:, 4] - x1 * x2
        root = np.sqrt(v1 * v2)
        out = np.empty_like(mu)
        out[:, 0] = -x2 / root + c * x1 / (v1 * root)
        out[:, 1] = -x1 / root + c * x2 / (v2 * root)
        out[:, 2] = -c / (2.0 * v1 * root)
        out[:, 3] = -c / (2.0 * v2 * root)
        out[:, 4] = 1.0 / root
        return out

    def guard(mu):
        v1 = mu[:, 2] - mu[:, 0] ** 2
        v2 = mu[:, 3] - mu[:, 1] ** 2
        return (v1 > guard_margin) & (v2 > guard_margin)

    return ParameterFunctional(
        name=f"autocorr:{h}", offset=h, dim=5, guard_margin=guard_margin,
        _lift=lift, _f=f, _grad=grad, _guard=guard,
    )


def kurtosis_functional(guard_margin: float = DEFAULT_GUARD_MARGIN) -> ParameterFunctional:
    """Marginal kurtosis E(X - EX)^4 / Var(X)^2 in raw moments of (x, .., x^4)."""

    def lift(x):
        x = _univariate(x, "kurtosis")
        x2 = x * x
        return np.column_stack([x, x2, x2 * x, x2 * x2])

    def f(mu):
        m1, m2, m3, m4 = mu.T
        v = m2 - m1 ** 2
        num = m4 - 4.0 * m1 * m3 + 6.0 * m1 ** 2 * m2 - 3.0 * m1 ** 4
        return num / v ** 2

    def grad(mu):
        m1, m2, m3, m4 = mu.T
        v = m2 - m1 ** 2
        num = m4 - 4.0 * m1 * m3 + 6.0 * m1 ** 2 * m2 - 3.0 * m1 ** 4
        out = np.empty_like(mu)
        out[:, 0] = (-4.0 * m3 + 12.0 * m1 * m2 - 12.0 * m1 ** 3) / v ** 2 \
            + 4.0 * m1 * num / v ** 3
        out[:, 1] = 6.0 * m1 ** 2 / v ** 2 - 2.0 * num / v ** 3
        out[:, 2] = -4.0 * m1 / v ** 2
        out[:, 3] = 1.0 / v ** 2
        return out

    return ParameterFunctional(
        name="kurtosis", offset=0, dim=4, guard_margin=guard_margin,
        _lift=lift, _f=f, _grad=grad,
        _guard=lambda mu: mu[:, 1] - mu[:, 0] ** 2 > guard_margin,
    )


def skewness_functional(guard_margin: float = DEFAULT_GUARD_MARGIN) -> ParameterFunctional:
    """Marginal skewness E(X - EX)^3 / Var(X)^{3/2} in raw moments of (x, x^2, x^3)."""

    def lift(x):
        x = _univariate(x, "skewness")
        x2 = x * x
        return np.column_stack([x, x2, x2 * x])

    def f(mu):
        m1, m2, m3 = mu.T
        v = m2 - m1 ** 2
        return (m3 - 3.0 * m1 * m2 + 2.0 * m1 ** 3) / v ** 1.5

    def grad(mu):
        m1, m2, m3 = mu.T
        v = m2 - m1 ** 2
        num = m3 - 3.0 * m1 * m2 + 2.0 * m1 ** 3
        out = np.empty_like(mu)
        out[:, 0] = (-3.0 * m2 + 6.0 * m1 ** 2) / v ** 1.5 + 3.0 * m1 * num / v ** 2.5
        out[:, 1] = -3.0 * m1 / v ** 1.5 - 1.5 * num / v ** 2.5
        out[:, 2] = v ** -1.5
        return out

    return ParameterFunctional(
        name="skewness", offset=0, dim=3, guard_margin=guard_margin,
        _lift=lift, _f=f, _grad=grad,
        _guard=lambda mu: mu[:, 1] - mu[:, 0] ** 2 > guard_margin,
    )


def coefficient_of_variation_functional(
        guard_margin: float = DEFAULT_GUARD_MARGIN) -> ParameterFunctional:
    """Coefficient of variation sqrt(Var X) / E X; needs mean and variance away from 0."""

    def lift(x):
        x = _univariate(x, "cv")
        return np.column_stack([x, x * x])

    def f(mu):
        return np.sqrt(mu[:, 1] - mu[:, 0] ** 2) / mu[:, 0]

    def grad(mu):
        m1 = mu[:, 0]
        s = np.sqrt(mu[:, 1] - m1 ** 2)
        out = np.empty_like(mu)
        out[:, 0] = -1.0 / s - s / m1 ** 2
        out[:, 1] = 1.0 / (2.0 * s * m1)
        return out

    def guard(mu):
        v = mu[:, 1] - mu[:, 0] ** 2
        return (v > guard_margin) & (np.abs(mu[:, 0]) > guard_margin)

    return ParameterFunctional(
        name="cv", offset=0, dim=2, guard_margin=guard_margin,
        _lift=lift, _f=f, _grad=grad, _guard=guard,
    )


def regression_functional(j: int, n_covariates: int,
                          guard_margin: float = DEFAULT_GUARD_MARGIN) -> ParameterFunctional:
    """Coordinate j (1-based) of the linear regression coefficient vector.

    The raw series must carry the response in column 0 and the q
    covariates in columns 1..q. The lift per row is
    (W, Z, W W^T flattened row-major, W Z) of length q^2 + 2q + 1, and
    f(mu) = [Cov(W)^{-1} Cov(W, Z)]_j assembled from those moments. The
    guard requires the smallest eigenvalue of the symmetrized covariance
    block to exceed the margin.
    """
    q = n_covariates
    if q < 1:
        raise ValueError("regression needs at least one covariate column")
    if not 1 <= j <= q:
        raise ValueError(f"coordinate j={j} outside 1..{q}")
    jj = j - 1
    dim = q * q + 2 * q + 1

    def split(mu):
        n_rows = mu.shape[0]
        w = mu[:, :q]
        zbar = mu[:, q]
        second = mu[:, q + 1:q + 1 + q * q].reshape(n_rows, q, q)
        mwz = mu[:, q + 1 + q * q:]
        cov_w = second - w[:, :, None] * w[:, None, :]
        cov_wz = mwz - w * zbar[:, None]
        return w, zbar, cov_w, cov_wz

    def lift(data):
        if data.shape[1] != q + 1:
            raise ShapeMismatch(
                f"regression lift expects {q + 1} columns (response first), got {data.shape[1]}"
            )
        z = data[:, 0]
        w = data[:, 1:]
        outer = (w[:, :, None] * w[:, None, :]).reshape(data.shape[0], q * q)
        return np.column_stack([w, z, outer, w * z[:, None]])

    def f(mu):
        _, _, cov_w, cov_wz = split(mu)
        beta = np.linalg.solve(cov_w, cov_wz[..., None])[..., 0]
        return beta[:, jj]

    def grad(mu):
        w, _, cov_w, cov_wz = split(mu)
        zbar = mu[:, q]
        beta = np.linalg.solve(cov_w, cov_wz[..., None])[..., 0]
        unit = np.zeros(q)
        unit[jj] = 1.0
        resolvent = np.linalg.solve(
            np.swapaxes(cov_w, 1, 2), np.broadcast_to(unit, w.shape).copy()[..., None]
        )[..., 0]
        wb = np.einsum("ij,ij->i", w, beta)
        rw = np.einsum("ij,ij->i", resolvent, w)
        out = np.empty_like(mu)
        out[:, :q] = resolvent * (wb - zbar)[:, None] + beta * rw[:, None]
        out[:, q] = -rw
        out[:, q + 1:q + 1 + q * q] = (
            -resolvent[:, :, None] * beta[:, None, :]
        ).reshape(mu.shape[0], q * q)
        out[:, q + 1 + q * q:] = resolvent
        return out

    def guard(mu):
        _, _, cov_w, _ = split(mu)
        sym = 0.5 * (cov_w + np.swapaxes(cov_w, 1, 2))
        smallest = np.linalg.eigvalsh(sym)[:, 0]
        return smallest > guard_margin

    return ParameterFunctional(
        name=f"regression:{j}", offset=0, dim=dim, guard_margin=guard_margin,
        _lift=lift, _f=f, _grad=grad, _guard=guard,
    )


def get_functional(name: str, d_raw: int = 1,
                   guard_margin: float = DEFAULT_GUARD_MARGIN) -> ParameterFunctional:
    """Resolve a CLI/config selection string into a functional.

    Recognized: "mean", "variance", "autocorr:<h>", "kurtosis",
    "skewness", "cv", "regression:<j>". The regression form infers the
    covariate count from d_raw (response column + covariates).
    """
    base, _, arg = name.partition(":")
    base = base.strip().lower()
    if base == "mean":
        return mean_functional(guard_margin)
    if base == "variance":
        return variance_functional(guard_margin)
    if base == "autocorr":
        return autocorrelation_functional(int(arg) if arg else 1, guard_margin)
    if base == "kurtosis":
        return kurtosis_functional(guard_margin)
    if base == "skewness":
        return skewness_functional(guard_margin)
    if base == "cv":
        return coefficient_of_variation_functional(guard_margin)
    if base == "regression":
        if d_raw < 2:
            raise ShapeMismatch("regression needs a response column plus covariate columns")
        return regression_functional(int(arg) if arg else 1, d_raw - 1, guard_margin)
    raise ValueError(
        f"unknown functional '{name}'; expected one of mean, variance, autocorr:<h>, "
        "kurtosis, skewness, cv, regression:<j>"
    )
