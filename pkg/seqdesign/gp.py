"""
seqdesign exact Gaussian-process regression.

Isotropic squared-exponential kernel, zero mean on standardized data,
hyperparameters fitted by multi-restart L-BFGS-B over log-parameter space.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize
from scipy.spatial.distance import cdist

from .types import FloatArray, KernelParams, Prediction, ScalingParams
from .warnings import DimensionError, InvalidInputError, NumericalError

# Diagonal jitter tried in turn until the Cholesky factorization succeeds.
JITTER_LADDER = tuple(10.0**-k for k in range(10, 3, -1))

LOG_2PI = float(np.log(2.0 * np.pi))

# Returned to the optimizer where the covariance cannot be factorized.
FAILED_OBJECTIVE = 1e25


@dataclass(frozen=True)
class GpConfig:
    n_restarts: int = 5
    n_candidates: int = 256
    lengthscale_bounds: Tuple[float, float] = (1e-2, 1e2)
    signal_variance_bounds: Tuple[float, float] = (1e-2, 1e2)
    noise_variance_bounds: Tuple[float, float] = (1e-6, 1e1)
    max_iter: int = 200

    def __post_init__(self) -> None:
        if self.n_restarts < 1:
            raise InvalidInputError(
                f"need at least one optimizer restart, got {self.n_restarts}"
            )
        if self.n_candidates < 0:
            raise InvalidInputError(
                f"candidate count must not be negative, got {self.n_candidates}"
            )
        for low, high in self.bounds():
            if not 0.0 < low <= high:
                raise InvalidInputError(f"bad hyperparameter bounds ({low}, {high})")

    def bounds(self) -> List[Tuple[float, float]]:
        return [
            self.lengthscale_bounds,
            self.signal_variance_bounds,
            self.noise_variance_bounds,
        ]

    def log_bounds(self) -> Tuple[FloatArray, FloatArray]:
        bounds = np.log(np.array(self.bounds(), dtype=np.float64))
        return bounds[:, 0], bounds[:, 1]


@dataclass(frozen=True)
class GpModel:
    X: FloatArray
    y: FloatArray
    params: KernelParams
    cholesky_factor: FloatArray
    alpha: FloatArray
    log_evidence: float
    jitter: float

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])

    @property
    def n_train(self) -> int:
        return int(self.X.shape[0])


def kernel(x1: npt.ArrayLike, x2: npt.ArrayLike, params: KernelParams) -> float:
    a = np.asarray(x1, dtype=np.float64)
    b = np.asarray(x2, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError(f"cannot compare feature vectors of shape {a.shape} and {b.shape}")
    sq = float(np.sum(np.square(a - b)))
    return params.signal_variance * float(np.exp(-0.5 * sq / params.lengthscale**2))


def _kernel_from_sq(sq: FloatArray, params: KernelParams) -> FloatArray:
    return params.signal_variance * np.exp(-0.5 * sq / params.lengthscale**2)


def kernel_matrix(a: npt.ArrayLike, b: npt.ArrayLike, params: KernelParams) -> FloatArray:
    left = np.atleast_2d(np.asarray(a, dtype=np.float64))
    right = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if left.shape[1] != right.shape[1]:
        raise DimensionError(
            f"feature dimensions differ: {left.shape[1]} and {right.shape[1]}"
        )
    return _kernel_from_sq(cdist(left, right, "sqeuclidean"), params)


def _check_training_data(X: npt.ArrayLike, y: npt.ArrayLike) -> Tuple[FloatArray, FloatArray]:
    x_array = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y_array = np.asarray(y, dtype=np.float64)
    if y_array.ndim != 1 or x_array.shape[0] != y_array.shape[0]:
        raise DimensionError(
            f"{x_array.shape[0]} training inputs but responses of shape {y_array.shape}"
        )
    if not (np.all(np.isfinite(x_array)) and np.all(np.isfinite(y_array))):
        raise InvalidInputError("training data contains non-finite values")
    return x_array, y_array


def _factorize(k: FloatArray, noise_variance: float) -> Tuple[FloatArray, float]:
    identity = np.eye(k.shape[0])
    for jitter in JITTER_LADDER:
        try:
            factor = cholesky(k + (noise_variance + jitter) * identity, lower=True)
            return factor, jitter
        except np.linalg.LinAlgError:
            continue
    condition_number = np.linalg.cond(k + noise_variance * identity)
    raise NumericalError(
        f"covariance matrix is not positive definite even with jitter "
        f"{JITTER_LADDER[-1]:g} (condition number {condition_number:.3g})"
    )


def _condition(X: FloatArray, y: FloatArray, params: KernelParams, sq: FloatArray) -> GpModel:
    factor, jitter = _factorize(_kernel_from_sq(sq, params), params.noise_variance)
    alpha = cho_solve((factor, True), y)
    log_evidence = (
        -0.5 * float(y @ alpha)
        - float(np.sum(np.log(np.diag(factor))))
        - 0.5 * y.shape[0] * LOG_2PI
    )
    if not np.isfinite(log_evidence):
        raise NumericalError("log marginal likelihood is not finite")
    return GpModel(X, y, params, factor, alpha, log_evidence, jitter)


def condition(X: npt.ArrayLike, y: npt.ArrayLike, params: KernelParams) -> GpModel:
    """Exact GP posterior at fixed hyperparameters."""
    x_array, y_array = _check_training_data(X, y)
    if x_array.shape[0] < 1:
        raise InvalidInputError("need at least one training point")
    return _condition(x_array, y_array, params, cdist(x_array, x_array, "sqeuclidean"))


def log_marginal_likelihood(X: npt.ArrayLike, y: npt.ArrayLike, params: KernelParams) -> float:
    return condition(X, y, params).log_evidence


def _gradient(model: GpModel, sq: FloatArray) -> FloatArray:
    # d/dlog(theta) of the log evidence: 0.5 tr((alpha alpha^T - K^-1) dK)
    params = model.params
    k = _kernel_from_sq(sq, params)
    inverse = cho_solve((model.cholesky_factor, True), np.eye(model.n_train))
    inner = np.outer(model.alpha, model.alpha) - inverse
    return 0.5 * np.array(
        [
            np.sum(inner * (k * sq / params.lengthscale**2)),
            np.sum(inner * k),
            params.noise_variance * np.trace(inner),
        ]
    )


def log_marginal_likelihood_gradient(
    X: npt.ArrayLike, y: npt.ArrayLike, params: KernelParams
) -> FloatArray:
    """Gradient with respect to (log lengthscale, log signal, log noise)."""
    x_array, y_array = _check_training_data(X, y)
    sq = cdist(x_array, x_array, "sqeuclidean")
    return _gradient(_condition(x_array, y_array, params, sq), sq)


def _data_informed_start(sq: FloatArray, low: FloatArray, high: FloatArray) -> FloatArray:
    """Median pairwise distance as lengthscale, unit signal, noise 0.1."""
    distances = np.sqrt(sq[np.triu_indices_from(sq, k=1)])
    distances = distances[distances > 0.0]
    lengthscale = float(np.median(distances)) if distances.size else 1.0
    start = np.log(np.array([lengthscale, 1.0, 0.1]))
    return np.clip(start, low, high)


def _prescreen(
    x_array: FloatArray, y_array: FloatArray, sq: FloatArray, candidates: FloatArray
) -> FloatArray:
    """Candidates ordered by log evidence, best first; ties keep their order."""
    scores = np.empty(candidates.shape[0])
    for i, theta in enumerate(candidates):
        try:
            model = _condition(x_array, y_array, KernelParams.from_log_vector(theta), sq)
        except NumericalError:
            scores[i] = -np.inf
        else:
            scores[i] = model.log_evidence
    return candidates[np.argsort(-scores, kind="stable")]


def fit(
    X: npt.ArrayLike,
    y: npt.ArrayLike,
    config: GpConfig,
    rng_seed: int,
    initial: Optional[KernelParams] = None,
) -> GpModel:
    """Maximize the log evidence from `config.n_restarts' seeded starts.

    The starts are the best of `config.n_candidates' seeded log-box points
    plus one data-informed point, ranked by log evidence. With `initial',
    the first restart starts there instead.
    """
    x_array, y_array = _check_training_data(X, y)
    if x_array.shape[0] < 2:
        raise InvalidInputError(
            f"need at least 2 training points to fit, got {x_array.shape[0]}"
        )
    sq = cdist(x_array, x_array, "sqeuclidean")
    low, high = config.log_bounds()
    candidates = _prescreen(
        x_array,
        y_array,
        sq,
        np.vstack(
            [
                _data_informed_start(sq, low, high),
                np.random.default_rng(rng_seed).uniform(
                    low, high, size=(max(config.n_candidates, config.n_restarts), low.shape[0])
                ),
            ]
        ),
    )
    starts = candidates[: config.n_restarts]
    if initial is not None:
        with np.errstate(divide="ignore"):
            warm = np.clip(initial.as_log_vector(), low, high)
        starts = np.vstack([warm, candidates[: config.n_restarts - 1]])

    def objective(theta: FloatArray) -> Tuple[float, FloatArray]:
        try:
            model = _condition(x_array, y_array, KernelParams.from_log_vector(theta), sq)
        except NumericalError:
            return FAILED_OBJECTIVE, np.zeros_like(theta)
        return -model.log_evidence, -_gradient(model, sq)

    best: Optional[GpModel] = None
    try:
        best = _condition(x_array, y_array, KernelParams.from_log_vector(candidates[0]), sq)
    except NumericalError:
        pass
    for start in starts:
        result = minimize(
            objective,
            start,
            jac=True,
            method="L-BFGS-B",
            bounds=list(zip(low, high)),
            options={"maxiter": config.max_iter},
        )
        theta = np.clip(result.x, low, high)
        try:
            model = _condition(x_array, y_array, KernelParams.from_log_vector(theta), sq)
        except NumericalError:
            continue
        if best is None or model.log_evidence > best.log_evidence:
            best = model
    if best is None:
        raise NumericalError(
            f"every one of {config.n_restarts} optimizer restarts failed to factorize"
        )
    return best


def predict_standardized(
    model: GpModel, X_star: npt.ArrayLike
) -> Tuple[FloatArray, FloatArray]:
    """Latent posterior mean and std at standardized inputs."""
    points = np.atleast_2d(np.asarray(X_star, dtype=np.float64))
    if points.shape[1] != model.n_features:
        raise DimensionError(
            f"model has {model.n_features} features, got {points.shape[1]}"
        )
    cross = kernel_matrix(points, model.X, model.params)
    mean = cross @ model.alpha
    v = solve_triangular(model.cholesky_factor, cross.T, lower=True)
    variance = model.params.signal_variance - np.sum(v * v, axis=0)
    return mean, np.sqrt(np.maximum(variance, 0.0))


def predict(model: GpModel, x_star: npt.ArrayLike, scaling: ScalingParams) -> Prediction:
    point = np.asarray(x_star, dtype=np.float64)
    if point.ndim != 1 or point.shape[0] != model.n_features:
        raise DimensionError(
            f"model has {model.n_features} features, got input of shape {point.shape}"
        )
    mean, std = predict_standardized(model, scaling.transform_features(point)[None, :])
    return Prediction(
        mean=float(scaling.inverse_response(mean[0])),
        std=float(scaling.inverse_std(std[0])),
    )
