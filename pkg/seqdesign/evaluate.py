"""
seqdesign evaluation: RMSE and repeated-run summaries.

Standard deviations use the sample (n - 1) convention; quartiles use linear
interpolation between order statistics.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .types import CampaignResult, FloatArray, RunOutcome
from .warnings import EvaluationError


@dataclass(frozen=True)
class RunSummary:
    per_run_rmse: Tuple[float, ...]
    mean_rmse: float
    std_rmse: float
    std_defined: bool
    quartiles: Tuple[float, float, float, float, float]
    mean_weights: Optional[Tuple[float, ...]] = None
    n_failed: int = 0

    @property
    def n_runs(self) -> int:
        return len(self.per_run_rmse)


def rmse(y_true: npt.ArrayLike, y_pred: npt.ArrayLike) -> float:
    truth = np.asarray(y_true, dtype=np.float64)
    predicted = np.asarray(y_pred, dtype=np.float64)
    if truth.ndim != 1 or truth.shape != predicted.shape:
        raise EvaluationError(
            f"cannot compare {truth.shape} values against {predicted.shape} predictions"
        )
    if truth.shape[0] == 0:
        raise EvaluationError("RMSE of an empty test set is undefined")
    if not (np.all(np.isfinite(truth)) and np.all(np.isfinite(predicted))):
        raise EvaluationError("RMSE inputs must be finite")
    return float(np.sqrt(np.mean(np.square(truth - predicted))))


def summarize_values(
    per_run_rmse: Sequence[float],
    weights: Optional[Sequence[Sequence[float]]] = None,
    n_failed: int = 0,
) -> RunSummary:
    """Summary statistics of bare per-run RMSE values.

    `weights', when given, holds one final weight vector per run and is
    averaged into `mean_weights'.
    """
    values: FloatArray = np.asarray(per_run_rmse, dtype=np.float64)
    if values.ndim != 1 or values.shape[0] == 0:
        raise EvaluationError("need at least one RMSE value to summarize")
    if not np.all(np.isfinite(values)):
        raise EvaluationError("RMSE values must be finite")
    std_defined = values.shape[0] > 1
    low, q1, median, q3, high = np.percentile(
        values, [0, 25, 50, 75, 100], method="linear"
    )
    mean_weights = None
    if weights is not None:
        matrix = np.asarray(weights, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != values.shape[0]:
            raise EvaluationError(
                f"{values.shape[0]} runs but weights of shape {matrix.shape}"
            )
        mean_weights = tuple(float(w) for w in matrix.mean(axis=0))
    return RunSummary(
        per_run_rmse=tuple(float(v) for v in values),
        mean_rmse=float(values.mean()),
        std_rmse=float(values.std(ddof=1)) if std_defined else 0.0,
        std_defined=std_defined,
        quartiles=(float(low), float(q1), float(median), float(q3), float(high)),
        mean_weights=mean_weights,
        n_failed=n_failed,
    )


def summarize(results: Sequence[RunOutcome]) -> RunSummary:
    """Summarize finished campaigns; failed runs are only counted."""
    finished = [r for r in results if isinstance(r, CampaignResult)]
    if not finished:
        raise EvaluationError("no finished runs to summarize")
    weights = [r.final_weights for r in finished if r.final_weights is not None]
    if weights and len(weights) != len(finished):
        raise EvaluationError("cannot mix runs with and without model weights")
    return summarize_values(
        [r.test_rmse for r in finished],
        weights or None,
        n_failed=len(results) - len(finished),
    )
