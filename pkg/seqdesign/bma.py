"""
seqdesign Bayesian model averaging over Gaussian-process models.

Every model in an ensemble is fitted on the same training rows and the same
standardized responses, so their log evidences are comparable; feature
scaling is per model.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from joblib import Parallel, delayed  # type: ignore
from scipy.special import logsumexp

from . import gp
from .acquisition import expected_improvement_array, rank_candidates
from .dataset import fit_scaling, project
from .gp import GpConfig, GpModel
from .types import (
    AcquisitionVariant,
    ExperimentTable,
    FloatArray,
    Incumbent,
    KernelParams,
    MixturePrediction,
    ModelSpec,
    ScalingParams,
    ScoredCandidate,
)
from .warnings import DimensionError, InvalidInputError, SeqDesignError


@dataclass(frozen=True)
class BmaEnsemble:
    specs: Tuple[ModelSpec, ...]
    models: Tuple[GpModel, ...]
    scalings: Tuple[ScalingParams, ...]
    columns: Tuple[Tuple[int, ...], ...]
    feature_names: Tuple[str, ...]
    log_evidences: FloatArray
    weights: FloatArray

    @property
    def size(self) -> int:
        return len(self.specs)

    @property
    def response_scaling(self) -> ScalingParams:
        return self.scalings[0]

    def kernel_params(self) -> Tuple[KernelParams, ...]:
        return tuple(model.params for model in self.models)


def compute_weights(log_evidences: npt.ArrayLike, log_priors: npt.ArrayLike) -> FloatArray:
    """Posterior model probabilities, normalized in log space."""
    evidence = np.asarray(log_evidences, dtype=np.float64)
    prior = np.asarray(log_priors, dtype=np.float64)
    if evidence.ndim != 1 or evidence.shape != prior.shape:
        raise DimensionError(
            f"{evidence.shape} log evidences but {prior.shape} log priors"
        )
    if evidence.shape[0] < 1:
        raise InvalidInputError("need at least one model to weight")
    if not (np.all(np.isfinite(evidence)) and np.all(np.isfinite(prior))):
        raise InvalidInputError("log evidences and log priors must be finite")
    joint = evidence + prior
    weights = np.exp(joint - logsumexp(joint))
    return weights / np.sum(weights)


def log_priors(specs: Sequence[ModelSpec]) -> FloatArray:
    return np.log(np.array([spec.prior_weight for spec in specs], dtype=np.float64))


def _fit_component(
    table: ExperimentTable,
    rows: Sequence[int],
    spec: ModelSpec,
    config: GpConfig,
    rng_seed: int,
    initial: Optional[KernelParams],
) -> Tuple[GpModel, ScalingParams]:
    projected = project(table, spec)
    try:
        scaling = fit_scaling(projected, rows)
        index = np.asarray(rows, dtype=np.intp)
        model = gp.fit(
            scaling.transform_features(projected.rows[index]),
            scaling.transform_response(projected.responses[index]),
            config,
            rng_seed,
            initial,
        )
    except SeqDesignError as exc:
        raise type(exc)(f"model `{spec.name}': {exc}") from exc
    return model, scaling


def fit_ensemble(
    table: ExperimentTable,
    training_indices: Sequence[int],
    specs: Sequence[ModelSpec],
    config: GpConfig,
    rng_seed: int,
    initial_params: Optional[Sequence[KernelParams]] = None,
    n_jobs: int = 1,
) -> BmaEnsemble:
    """Fit one GP per spec on the shared training rows and weight them.

    Every spec is fitted with the same seed, so specs with identical feature
    lists get identical fits.
    """
    if len(specs) < 1:
        raise InvalidInputError("an ensemble needs at least one model spec")
    if len(training_indices) < 2:
        raise InvalidInputError(
            f"need at least 2 training rows, got {len(training_indices)}"
        )
    if initial_params is not None and len(initial_params) != len(specs):
        raise InvalidInputError("one set of initial hyperparameters per spec is required")
    starts = list(initial_params) if initial_params is not None else [None] * len(specs)

    fits = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_fit_component)(table, training_indices, spec, config, rng_seed, start)
        for spec, start in zip(specs, starts)
    )
    models = tuple(model for model, _ in fits)
    evidences = np.array([model.log_evidence for model in models], dtype=np.float64)
    return BmaEnsemble(
        specs=tuple(specs),
        models=models,
        scalings=tuple(scaling for _, scaling in fits),
        columns=tuple(table.column_indices(spec.features) for spec in specs),
        feature_names=table.feature_names,
        log_evidences=evidences,
        weights=compute_weights(evidences, log_priors(specs)),
    )


def _as_rows(ensemble: BmaEnsemble, x: npt.ArrayLike) -> FloatArray:
    rows = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if rows.shape[1] != len(ensemble.feature_names):
        raise DimensionError(
            f"ensemble needs {len(ensemble.feature_names)} features, got {rows.shape[1]}"
        )
    return rows


def component_predictions(
    ensemble: BmaEnsemble, x: npt.ArrayLike
) -> Tuple[FloatArray, FloatArray]:
    """Standardized (L x k) means and stds of every component."""
    rows = _as_rows(ensemble, x)
    means = np.empty((ensemble.size, rows.shape[0]))
    stds = np.empty_like(means)
    for i, (model, scaling, columns) in enumerate(
        zip(ensemble.models, ensemble.scalings, ensemble.columns)
    ):
        z = scaling.transform_features(rows[:, list(columns)])
        means[i], stds[i] = gp.predict_standardized(model, z)
    return means, stds


def mixture_moments(
    weights: npt.ArrayLike, means: npt.ArrayLike, stds: npt.ArrayLike
) -> Tuple[FloatArray, FloatArray]:
    """Exact mean and std of a Gaussian mixture, columnwise over (L x k) inputs."""
    w = np.asarray(weights, dtype=np.float64)[:, None]
    mu = np.atleast_2d(np.asarray(means, dtype=np.float64).T).T
    sigma = np.atleast_2d(np.asarray(stds, dtype=np.float64).T).T
    mean = np.sum(w * mu, axis=0)
    variance = np.sum(w * sigma * sigma, axis=0) + np.sum(w * (mu - mean) ** 2, axis=0)
    return mean, np.sqrt(variance)


def mixture_predict_many(
    ensemble: BmaEnsemble, x: npt.ArrayLike
) -> Tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
    """Mixture mean/std and component means/stds, in original response units."""
    means, stds = component_predictions(ensemble, x)
    scaling = ensemble.response_scaling
    component_means = scaling.inverse_response(means)
    component_stds = scaling.inverse_std(stds)
    mean, std = mixture_moments(ensemble.weights, component_means, component_stds)
    return mean, std, component_means, component_stds


def mixture_predict(ensemble: BmaEnsemble, x_star: npt.ArrayLike) -> MixturePrediction:
    point = np.asarray(x_star, dtype=np.float64)
    if point.ndim != 1:
        raise DimensionError("x_star must be a single feature vector")
    mean, std, means, stds = mixture_predict_many(ensemble, point)
    return MixturePrediction(
        mean=float(mean[0]),
        std=float(std[0]),
        component_means=tuple(float(m) for m in means[:, 0]),
        component_stds=tuple(float(s) for s in stds[:, 0]),
    )


def averaged_ei_many(
    ensemble: BmaEnsemble, x: npt.ArrayLike, incumbent: Incumbent
) -> FloatArray:
    """Posterior-weighted sum of per-model EI, in standardized units."""
    means, stds = component_predictions(ensemble, x)
    target = float(ensemble.response_scaling.transform_response(incumbent.value))
    terms = np.stack(
        [expected_improvement_array(m, s, target) for m, s in zip(means, stds)]
    )
    return np.sum(ensemble.weights[:, None] * terms, axis=0)


def averaged_ei(ensemble: BmaEnsemble, x_star: npt.ArrayLike, incumbent: Incumbent) -> float:
    return float(averaged_ei_many(ensemble, x_star, incumbent)[0])


def mixture_ei_many(
    ensemble: BmaEnsemble, x: npt.ArrayLike, incumbent: Incumbent
) -> FloatArray:
    """EI of the moment-matched mixture, in standardized units."""
    means, stds = component_predictions(ensemble, x)
    mean, std = mixture_moments(ensemble.weights, means, stds)
    target = float(ensemble.response_scaling.transform_response(incumbent.value))
    return expected_improvement_array(mean, std, target)


def mixture_ei(ensemble: BmaEnsemble, x_star: npt.ArrayLike, incumbent: Incumbent) -> float:
    return float(mixture_ei_many(ensemble, x_star, incumbent)[0])


def rank_ensemble(
    ensemble: BmaEnsemble,
    pool_rows: npt.ArrayLike,
    pool_indices: Sequence[int],
    incumbent: Incumbent,
    variant: AcquisitionVariant = AcquisitionVariant.WEIGHTED_EI,
) -> List[ScoredCandidate]:
    if len(pool_indices) == 0:
        raise InvalidInputError("cannot rank an empty pool")
    rows = _as_rows(ensemble, pool_rows)
    if rows.shape[0] != len(pool_indices):
        raise DimensionError(f"{rows.shape[0]} pool rows but {len(pool_indices)} indices")
    if variant is AcquisitionVariant.MIXTURE_EI:
        scores = mixture_ei_many(ensemble, rows, incumbent)
    else:
        scores = averaged_ei_many(ensemble, rows, incumbent)
    mean, std, _, _ = mixture_predict_many(ensemble, rows)
    return rank_candidates(pool_indices, scores, mean, std)


def condition_ensemble(
    ensemble: BmaEnsemble, extra_rows: npt.ArrayLike, extra_responses: npt.ArrayLike
) -> BmaEnsemble:
    """Add fantasy observations at fixed hyperparameters, scalings and weights."""
    rows = _as_rows(ensemble, extra_rows)
    responses = np.atleast_1d(np.asarray(extra_responses, dtype=np.float64))
    if responses.shape != (rows.shape[0],):
        raise DimensionError(f"{rows.shape[0]} rows but {responses.shape} responses")
    models = []
    for model, scaling, columns in zip(ensemble.models, ensemble.scalings, ensemble.columns):
        z = scaling.transform_features(rows[:, list(columns)])
        models.append(
            gp.condition(
                np.vstack([model.X, z]),
                np.concatenate([model.y, scaling.transform_response(responses)]),
                model.params,
            )
        )
    return BmaEnsemble(
        specs=ensemble.specs,
        models=tuple(models),
        scalings=ensemble.scalings,
        columns=ensemble.columns,
        feature_names=ensemble.feature_names,
        log_evidences=ensemble.log_evidences,
        weights=ensemble.weights,
    )
