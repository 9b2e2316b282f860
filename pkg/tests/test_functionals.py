"""Moment lifts, parameter maps, gradients, and domain guards."""

import numpy as np
import pytest

from lscusum import (
    DomainGuardViolation,
    RawSeries,
    SeriesTooShort,
    ShapeMismatch,
    autocorrelation_functional,
    coefficient_of_variation_functional,
    get_functional,
    kurtosis_functional,
    mean_functional,
    regression_functional,
    skewness_functional,
    variance_functional,
)

ALL_BUILTINS = [
    mean_functional(),
    variance_functional(),
    autocorrelation_functional(1),
    autocorrelation_functional(3),
    kurtosis_functional(),
    skewness_functional(),
    coefficient_of_variation_functional(),
    regression_functional(1, 2),
    regression_functional(2, 2),
]


def _random_domain_point(functional, rng):
    """Moment vector of an actual random sample; always guard-passing."""
    name = functional.name
    if name.startswith("regression"):
        w = rng.standard_normal((50, 2)) @ np.array([[1.0, 0.4], [0.0, 0.9]])
        z = w @ np.array([0.7, -1.2]) + rng.standard_normal(50)
        raw = RawSeries(np.column_stack([z, w]))
    elif name == "cv":
        raw = RawSeries(3.0 + rng.standard_normal(50))
    else:
        raw = RawSeries(rng.standard_normal(50) * (1.0 + rng.random()))
    return functional.lift(raw).data.mean(axis=0)


# -- raw series container ------------------------------------------------

def test_raw_series_promotes_1d():
    raw = RawSeries(np.array([1.0, 2.0]))
    assert raw.data.shape == (2, 1)
    assert raw.n == 2 and raw.d_raw == 1


def test_raw_series_rejects_empty_and_nonfinite():
    with pytest.raises(ShapeMismatch):
        RawSeries(np.empty((0, 1)))
    with pytest.raises(ShapeMismatch):
        RawSeries(np.array([1.0, np.nan]))
    with pytest.raises(ShapeMismatch):
        RawSeries(np.ones((2, 2, 2)))


# -- lifts ----------------------------------------------------------------

def test_mean_lift_is_identity():
    raw = RawSeries(np.array([3.0, -1.0, 2.0]))
    y = mean_functional().lift(raw)
    np.testing.assert_array_equal(y.data, raw.data)
    assert y.offset == 0 and y.m == 3


def test_variance_lift_values():
    y = variance_functional().lift(RawSeries(np.array([1.0, 2.0, 3.0])))
    np.testing.assert_array_equal(y.data, [[1, 1], [2, 4], [3, 9]])


def test_autocorrelation_lift_values_and_offset():
    y = autocorrelation_functional(1).lift(RawSeries(np.array([1.0, 2.0, 3.0, 4.0])))
    assert y.offset == 1 and y.m == 3
    np.testing.assert_array_equal(
        y.data, [[2, 1, 4, 1, 2], [3, 2, 9, 4, 6], [4, 3, 16, 9, 12]]
    )


def test_lift_too_short_raises():
    with pytest.raises(SeriesTooShort):
        autocorrelation_functional(3).lift(RawSeries(np.array([1.0, 2.0, 3.0])))


def test_regression_lift_layout():
    data = np.array([[5.0, 1.0, 2.0]])
    y = regression_functional(1, 2).lift(RawSeries(data))
    # (W, Z, vec(WW'), WZ)
    np.testing.assert_array_equal(y.data, [[1, 2, 5, 1, 2, 2, 4, 5, 10]])


def test_univariate_lift_rejects_matrix_input():
    with pytest.raises(ShapeMismatch):
        variance_functional().lift(RawSeries(np.ones((5, 2))))


# -- parameter values -----------------------------------------------------

def test_variance_value():
    assert variance_functional().eval_f([1.0, 5.0]) == pytest.approx(4.0)


def test_autocorrelation_value():
    # moments of (X, Y) with EX=EY=0, VarX=4, VarY=1, Cov=1
    f = autocorrelation_functional(1)
    assert f.eval_f([0.0, 0.0, 4.0, 1.0, 1.0]) == pytest.approx(0.5)


def test_kurtosis_of_standard_normal_moments():
    assert kurtosis_functional().eval_f([0.0, 1.0, 0.0, 3.0]) == pytest.approx(3.0)


def test_kurtosis_shift_invariance():
    f = kurtosis_functional()
    x = np.random.default_rng(0).standard_normal(400)
    mu = f.lift(RawSeries(x)).data.mean(axis=0)
    mu_shift = f.lift(RawSeries(x + 10.0)).data.mean(axis=0)
    assert f.eval_f(mu_shift) == pytest.approx(f.eval_f(mu), rel=1e-9)


def test_skewness_value():
    assert skewness_functional().eval_f([0.0, 1.0, 0.0]) == pytest.approx(0.0)
    # exponential(1): m = (1, 2, 6), skewness 2
    assert skewness_functional().eval_f([1.0, 2.0, 6.0]) == pytest.approx(2.0)


def test_cv_value():
    assert coefficient_of_variation_functional().eval_f([2.0, 5.0]) == pytest.approx(0.5)


def test_regression_value_single_covariate():
    # W ~ (0, 2), Z = 1.5 W + noise with Cov(W, Z) = 3: beta = 1.5
    f = regression_functional(1, 1)
    assert f.eval_f([0.0, 0.0, 2.0, 3.0]) == pytest.approx(1.5)


def test_regression_recovers_coefficients_from_sample_moments():
    rng = np.random.default_rng(5)
    w = rng.standard_normal((100000, 2)) @ np.array([[1.0, 0.5], [0.0, 1.0]])
    z = w @ np.array([2.0, -1.0]) + rng.standard_normal(100000)
    mu = regression_functional(1, 2).lift(RawSeries(np.column_stack([z, w]))).data.mean(axis=0)
    assert regression_functional(1, 2).eval_f(mu) == pytest.approx(2.0, abs=0.02)
    assert regression_functional(2, 2).eval_f(mu) == pytest.approx(-1.0, abs=0.02)


# -- gradients ------------------------------------------------------------

def central_difference(functional, mu, step=1e-6):
    out = np.empty_like(mu)
    for i in range(mu.shape[0]):
        h = step * max(1.0, abs(mu[i]))
        up, down = mu.copy(), mu.copy()
        up[i] += h
        down[i] -= h
        out[i] = (functional.eval_f(up) - functional.eval_f(down)) / (2.0 * h)
    return out


@pytest.mark.parametrize("functional", ALL_BUILTINS, ids=lambda f: f.name)
def test_gradient_matches_central_differences(functional):
    rng = np.random.default_rng(31)
    for _ in range(20):
        mu = _random_domain_point(functional, rng)
        grad = functional.grad_f(mu)
        fd = central_difference(functional, mu)
        scale = max(1.0, float(np.max(np.abs(fd))))
        assert np.max(np.abs(grad - fd)) / scale < 1e-5


def test_batch_and_single_point_agree():
    rng = np.random.default_rng(8)
    for functional in ALL_BUILTINS:
        rows = np.vstack([_random_domain_point(functional, rng) for _ in range(4)])
        f_batch = functional.f_batch(rows)
        g_batch = functional.grad_batch(rows)
        for i in range(4):
            assert f_batch[i] == pytest.approx(functional.eval_f(rows[i]), rel=1e-12)
            np.testing.assert_allclose(g_batch[i], functional.grad_f(rows[i]), rtol=1e-12)


# -- guards ---------------------------------------------------------------

def test_variance_guard_blocks_degenerate_moments():
    f = variance_functional()
    assert not f.guard([2.0, 4.0])
    with pytest.raises(DomainGuardViolation):
        f.eval_f([2.0, 4.0])
    with pytest.raises(DomainGuardViolation):
        f.grad_f([2.0, 4.0])


def test_cv_guard_blocks_zero_mean():
    assert not coefficient_of_variation_functional().guard([0.0, 1.0])


def test_autocorrelation_guard_needs_both_variances():
    f = autocorrelation_functional(1)
    assert not f.guard([0.0, 0.0, 1.0, 0.0, 0.0])
    assert f.guard([0.0, 0.0, 1.0, 1.0, 0.3])


def test_regression_guard_blocks_singular_covariance():
    f = regression_functional(1, 2)
    mu = np.zeros(9)
    mu[3:7] = [1.0, 1.0, 1.0, 1.0]  # rank-one covariate covariance
    assert not f.guard(mu)


def test_guard_margin_is_respected():
    strict = variance_functional(guard_margin=0.5)
    assert not strict.guard([0.0, 0.4])
    assert strict.guard([0.0, 0.6])


def test_eval_rejects_wrong_length():
    with pytest.raises(ShapeMismatch):
        variance_functional().eval_f([1.0, 2.0, 3.0])


# -- name resolution -------------------------------------------------------

def test_get_functional_names():
    assert get_functional("mean").name == "mean"
    assert get_functional("autocorr:2").name == "autocorr:2"
    assert get_functional("autocorr").offset == 1
    assert get_functional("Variance").name == "variance"
    assert get_functional("regression:2", d_raw=3).name == "regression:2"
    assert get_functional("regression", d_raw=4).dim == 3 * 3 + 2 * 3 + 1


def test_get_functional_rejects_unknown():
    with pytest.raises(ValueError):
        get_functional("median")


def test_get_functional_regression_needs_covariates():
    with pytest.raises(ShapeMismatch):
        get_functional("regression:1", d_raw=1)


def test_autocorrelation_rejects_bad_lag():
    with pytest.raises(ValueError):
        autocorrelation_functional(0)


def test_regression_rejects_bad_coordinate():
    with pytest.raises(ValueError):
        regression_functional(3, 2)
    with pytest.raises(ValueError):
        regression_functional(1, 0)
