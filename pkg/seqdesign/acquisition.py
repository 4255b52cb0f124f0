"""
seqdesign Expected Improvement and batch selection over a finite pool.

EI is evaluated in standardized response units; the loop maximizes the
response, so the incumbent is the best observed value.
"""

from typing import List, Sequence

import numpy as np
import numpy.typing as npt
from scipy.special import erfc

from .gp import GpModel, predict_standardized
from .types import FloatArray, Incumbent, ScalingParams, ScoredCandidate
from .warnings import DimensionError, InvalidInputError

SQRT2 = float(np.sqrt(2.0))
INV_SQRT_2PI = float(1.0 / np.sqrt(2.0 * np.pi))


def std_normal_cdf(z: npt.ArrayLike) -> FloatArray:
    return 0.5 * erfc(-np.asarray(z, dtype=np.float64) / SQRT2)


def std_normal_pdf(z: npt.ArrayLike) -> FloatArray:
    value = np.asarray(z, dtype=np.float64)
    return INV_SQRT_2PI * np.exp(-0.5 * value * value)


def expected_improvement_array(
    mean: npt.ArrayLike, std: npt.ArrayLike, incumbent_value: float
) -> FloatArray:
    mu = np.asarray(mean, dtype=np.float64)
    sigma = np.asarray(std, dtype=np.float64)
    if not (
        np.all(np.isfinite(mu)) and np.all(np.isfinite(sigma)) and np.isfinite(incumbent_value)
    ):
        raise InvalidInputError("expected improvement needs finite inputs")
    if np.any(sigma < 0.0):
        raise InvalidInputError("predictive standard deviation is negative")
    delta = mu - incumbent_value
    positive = sigma > 0.0
    safe_sigma = np.where(positive, sigma, 1.0)
    z = delta / safe_sigma
    smooth = delta * std_normal_cdf(z) + safe_sigma * std_normal_pdf(z)
    ei = np.where(positive, smooth, np.maximum(delta, 0.0))
    return np.maximum(ei, 0.0)


def expected_improvement(mean: float, std: float, incumbent_value: float) -> float:
    return float(expected_improvement_array(mean, std, incumbent_value))


def find_incumbent(responses: npt.ArrayLike, observed: Sequence[int]) -> Incumbent:
    """Best observed response; ties go to the smallest row index."""
    values = np.asarray(responses, dtype=np.float64)
    if len(observed) == 0:
        raise InvalidInputError("no observed rows to take an incumbent from")
    best = min(observed, key=lambda i: (-values[i], i))
    return Incumbent(value=float(values[best]), index=int(best))


def rank_candidates(
    pool_indices: Sequence[int],
    ei: npt.ArrayLike,
    means: npt.ArrayLike,
    stds: npt.ArrayLike,
) -> List[ScoredCandidate]:
    """Sort descending by EI, ties by ascending pool index."""
    scores = np.asarray(ei, dtype=np.float64)
    if len(pool_indices) == 0:
        raise InvalidInputError("cannot rank an empty pool")
    if scores.shape != (len(pool_indices),):
        raise DimensionError(f"{len(pool_indices)} candidates but {scores.shape} scores")
    candidates = [
        ScoredCandidate(int(index), float(score), float(mean), float(std))
        for index, score, mean, std in zip(pool_indices, scores, means, stds)
    ]
    candidates.sort(key=lambda c: (-c.ei, c.pool_index))
    return candidates


def rank_pool(
    model: GpModel,
    pool_rows: npt.ArrayLike,
    pool_indices: Sequence[int],
    incumbent: Incumbent,
    scaling: ScalingParams,
) -> List[ScoredCandidate]:
    """Score every pool row by EI under one GP.

    `pool_rows' are in original feature units, aligned with `pool_indices'.
    Predicted mean and std are reported in original response units.
    """
    rows = np.atleast_2d(np.asarray(pool_rows, dtype=np.float64))
    if len(pool_indices) == 0:
        raise InvalidInputError("cannot rank an empty pool")
    if rows.shape[0] != len(pool_indices):
        raise DimensionError(f"{rows.shape[0]} pool rows but {len(pool_indices)} indices")
    mean, std = predict_standardized(model, scaling.transform_features(rows))
    ei = expected_improvement_array(
        mean, std, float(scaling.transform_response(incumbent.value))
    )
    return rank_candidates(
        pool_indices, ei, scaling.inverse_response(mean), scaling.inverse_std(std)
    )


def select_batch(ranked: Sequence[ScoredCandidate], q: int) -> List[int]:
    if q < 1:
        raise InvalidInputError(f"batch size must be at least 1, got {q}")
    return [candidate.pool_index for candidate in ranked[:q]]


def select_random(
    pool_indices: Sequence[int], q: int, rng: np.random.Generator
) -> List[int]:
    """Uniform-random control policy."""
    if q < 1:
        raise InvalidInputError(f"batch size must be at least 1, got {q}")
    size = min(q, len(pool_indices))
    return [int(i) for i in rng.choice(np.asarray(pool_indices), size=size, replace=False)]
