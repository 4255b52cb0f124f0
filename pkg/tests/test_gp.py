from typing import Tuple

import numpy as np
import pytest

from seqdesign import gp
from seqdesign.gp import (
    GpConfig,
    condition,
    fit,
    kernel,
    kernel_matrix,
    log_marginal_likelihood,
    log_marginal_likelihood_gradient,
    predict,
    predict_standardized,
)
from seqdesign.types import FloatArray, KernelParams, ScalingParams
from seqdesign.warnings import DimensionError, InvalidInputError, NumericalError


def random_problem(
    rng: np.random.Generator,
) -> Tuple[FloatArray, FloatArray, KernelParams]:
    m = int(rng.integers(2, 21))
    p = int(rng.integers(1, 15))
    X = rng.normal(size=(m, p))
    y = rng.normal(size=m)
    params = KernelParams(
        lengthscale=float(rng.uniform(0.5, 3.0)),
        signal_variance=float(rng.uniform(0.5, 2.0)),
        noise_variance=float(rng.uniform(0.05, 1.0)),
    )
    return X, y, params


def test_kernel_values() -> None:
    params = KernelParams(2.0, 1.5, 0.1)
    assert kernel([1.0, 2.0], [1.0, 2.0], params) == pytest.approx(1.5)
    assert kernel([0.0], [2.0], params) == pytest.approx(1.5 * np.exp(-0.5))
    assert kernel([0.0, 1.0], [3.0, -1.0], params) == kernel([3.0, -1.0], [0.0, 1.0], params)
    with pytest.raises(DimensionError):
        kernel([0.0], [0.0, 1.0], params)


def test_kernel_matrix_matches_scalar_kernel() -> None:
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=(4, 3)), rng.normal(size=(5, 3))
    params = KernelParams(0.7, 1.3, 0.01)
    matrix = kernel_matrix(a, b, params)
    assert matrix.shape == (4, 5)
    assert matrix[2, 3] == pytest.approx(kernel(a[2], b[3], params))


def test_cholesky_path_matches_dense_inverse() -> None:
    rng = np.random.default_rng(2024)
    for _ in range(50):
        X, y, params = random_problem(rng)
        X_star = rng.normal(size=(3, X.shape[1]))
        k = kernel_matrix(X, X, params) + params.noise_variance * np.eye(X.shape[0])
        inverse = np.linalg.inv(k)
        cross = kernel_matrix(X_star, X, params)
        oracle_mean = cross @ inverse @ y
        oracle_var = params.signal_variance - np.sum((cross @ inverse) * cross, axis=1)
        _, logdet = np.linalg.slogdet(k)
        oracle_lml = -0.5 * y @ inverse @ y - 0.5 * logdet - 0.5 * len(y) * np.log(2 * np.pi)

        model = condition(X, y, params)
        mean, std = predict_standardized(model, X_star)
        np.testing.assert_allclose(mean, oracle_mean, rtol=1e-8, atol=1e-9)
        np.testing.assert_allclose(std**2, oracle_var, rtol=1e-8, atol=1e-9)
        assert model.log_evidence == pytest.approx(oracle_lml, rel=1e-8)


def test_gradient_matches_finite_differences() -> None:
    rng = np.random.default_rng(5)
    X, y, params = random_problem(rng)
    theta = params.as_log_vector()
    gradient = log_marginal_likelihood_gradient(X, y, params)
    h = 1e-6
    for i in range(3):
        step = np.zeros(3)
        step[i] = h
        upper = log_marginal_likelihood(X, y, KernelParams.from_log_vector(theta + step))
        lower = log_marginal_likelihood(X, y, KernelParams.from_log_vector(theta - step))
        assert gradient[i] == pytest.approx((upper - lower) / (2 * h), rel=1e-4, abs=1e-6)


def test_fit_is_seeded_and_bounded() -> None:
    rng = np.random.default_rng(8)
    X = rng.uniform(-2, 2, size=(15, 2))
    y = np.sin(X[:, 0]) + 0.1 * rng.normal(size=15)
    config = GpConfig(n_restarts=3)
    first, second = fit(X, y, config, 42), fit(X, y, config, 42)
    assert first.params == second.params
    assert first.log_evidence == second.log_evidence
    for value, (low, high) in zip(
        (first.params.lengthscale, first.params.signal_variance, first.params.noise_variance),
        config.bounds(),
    ):
        assert low * (1 - 1e-9) <= value <= high * (1 + 1e-9)


def test_fit_from_initial_point_is_no_worse() -> None:
    rng = np.random.default_rng(3)
    X = rng.uniform(-2, 2, size=(12, 1))
    y = np.cos(2 * X[:, 0])
    initial = KernelParams(0.5, 1.0, 1e-3)
    model = fit(X, y, GpConfig(n_restarts=1), 0, initial)
    assert model.log_evidence >= log_marginal_likelihood(X, y, initial) - 1e-9


def test_fit_needs_two_points() -> None:
    with pytest.raises(InvalidInputError):
        fit([[0.0]], [1.0], GpConfig(), 0)


def test_bad_config() -> None:
    with pytest.raises(InvalidInputError):
        GpConfig(n_restarts=0)
    with pytest.raises(InvalidInputError):
        GpConfig(noise_variance_bounds=(1.0, 0.1))


def test_factorization_failure_reports_condition_number() -> None:
    indefinite = np.array([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(NumericalError, match="condition number"):
        gp._factorize(indefinite, 0.0)  # pylint: disable=protected-access


def test_predict_in_original_units() -> None:
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0.0, 1.0, 0.0, -1.0])
    model = condition(X, y, KernelParams(1.0, 1.0, 1e-6))
    scaling = ScalingParams(np.array([0.0]), np.array([1.0]), 500.0, 20.0)
    prediction = predict(model, [1.0], scaling)
    assert prediction.mean == pytest.approx(520.0, abs=1e-3)
    assert 0.0 <= prediction.std < 0.1
    far = predict(model, [50.0], scaling)
    assert far.mean == pytest.approx(500.0)
    assert far.std == pytest.approx(20.0)
    with pytest.raises(DimensionError):
        predict(model, [1.0, 2.0], scaling)


def test_posterior_variance_stays_below_prior() -> None:
    rng = np.random.default_rng(77)
    for _ in range(200):
        X, y, params = random_problem(rng)
        model = condition(X, y, params)
        X_star = np.vstack([rng.normal(size=(4, X.shape[1])), X[:2]])
        _, std = predict_standardized(model, X_star)
        assert np.all(std**2 <= params.signal_variance + 1e-9)


def test_fit_beats_random_search_over_the_box() -> None:
    config = GpConfig()
    low, high = config.log_bounds()
    for seed in range(20):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(10, 3))
        y = rng.normal(size=10)
        model = fit(X, y, config, seed)
        best_random = max(
            log_marginal_likelihood(X, y, KernelParams.from_log_vector(theta))
            for theta in np.random.default_rng(1000 + seed).uniform(low, high, size=(100, 3))
        )
        assert model.log_evidence >= best_random - 1e-6, seed


def test_fit_to_constant_zero_response() -> None:
    rng = np.random.default_rng(12)
    X = rng.normal(size=(10, 2))
    model = fit(X, np.zeros(10), GpConfig(), 0)
    assert np.isfinite(model.log_evidence)
    mean, _ = predict_standardized(model, rng.normal(size=(6, 2)))
    np.testing.assert_allclose(mean, 0.0, atol=1e-12)


def test_prescreen_candidates_are_validated() -> None:
    with pytest.raises(InvalidInputError, match="candidate count"):
        GpConfig(n_candidates=-1)
    rng = np.random.default_rng(8)
    X = rng.uniform(-2, 2, size=(10, 2))
    y = np.sin(X[:, 0])
    model = fit(X, y, GpConfig(n_restarts=2, n_candidates=0), 1)
    assert np.isfinite(model.log_evidence)
