"""
seqdesign basic types.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .warnings import (
    DimensionError,
    InvalidInputError,
    ScalingError,
    SchemaError,
    SpecError,
)

FloatArray = npt.NDArray[np.float64]


def _frozen_array(values: npt.ArrayLike, ndim: int, what: str) -> FloatArray:
    array = np.array(values, dtype=np.float64)
    if array.ndim != ndim:
        raise DimensionError(f"{what} must have {ndim} dimension(s), not {array.ndim}")
    array.flags.writeable = False
    return array


class Mode(Enum):
    BO = "bo"
    BMA = "bma"


class AcquisitionVariant(Enum):
    WEIGHTED_EI = "weighted-ei"
    MIXTURE_EI = "mixture-ei"


class Policy(Enum):
    EI = "ei"
    RANDOM = "random"


class BatchStrategy(Enum):
    GREEDY = "greedy"
    CONSTANT_LIAR = "constant-liar"


@dataclass(frozen=True)
class TableSchema:
    features: Tuple[str, ...]
    response: str

    def __post_init__(self) -> None:
        if len(self.features) == 0:
            raise SchemaError("schema lists no feature columns")
        seen = set()
        for name in (*self.features, self.response):
            if name in seen:
                raise SchemaError(f"column `{name}' is listed more than once")
            seen.add(name)


# Steel fatigue table columns: heat treatment first, then chemical composition.
NIMS_SCHEMA = TableSchema(
    features=(
        "NT",
        "THT",
        "THQCr",
        "CT",
        "DT",
        "QmT",
        "TT",
        "TCr",
        "C",
        "Si",
        "Mn",
        "Ni",
        "Cr",
        "Mo",
    ),
    response="Fatigue",
)


@dataclass(frozen=True)
class ExperimentTable:
    feature_names: Tuple[str, ...]
    rows: FloatArray
    responses: FloatArray
    response_name: str = "Fatigue"

    def __post_init__(self) -> None:
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "rows", _frozen_array(self.rows, 2, "rows"))
        object.__setattr__(
            self, "responses", _frozen_array(self.responses, 1, "responses")
        )
        if self.rows.shape[0] != self.responses.shape[0]:
            raise DimensionError(
                f"{self.rows.shape[0]} feature rows but {self.responses.shape[0]} responses"
            )
        if self.rows.shape[1] != len(self.feature_names):
            raise DimensionError(
                f"{len(self.feature_names)} feature names but {self.rows.shape[1]} columns"
            )
        if len(set(self.feature_names)) != len(self.feature_names):
            raise SchemaError("feature names are not unique")
        if not (np.all(np.isfinite(self.rows)) and np.all(np.isfinite(self.responses))):
            raise SchemaError("table contains missing or non-finite values")

    @property
    def n_rows(self) -> int:
        return int(self.rows.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.rows.shape[1])

    def column_indices(self, names: Sequence[str]) -> Tuple[int, ...]:
        index = {name: i for i, name in enumerate(self.feature_names)}
        columns = []
        for name in names:
            if name not in index:
                raise SpecError(f"unknown feature `{name}'")
            columns.append(index[name])
        return tuple(columns)


@dataclass(frozen=True)
class ModelSpec:
    name: str
    features: Tuple[str, ...]
    prior_weight: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "features", tuple(self.features))
        if len(self.features) == 0:
            raise SpecError(f"model `{self.name}' lists no features")
        if len(set(self.features)) != len(self.features):
            raise SpecError(f"model `{self.name}' lists a feature more than once")
        if not 0.0 < self.prior_weight <= 1.0:
            raise SpecError(
                f"model `{self.name}': prior weight {self.prior_weight} is not in (0, 1]"
            )


@dataclass(frozen=True)
class ScalingParams:
    feature_means: FloatArray
    feature_stds: FloatArray
    response_mean: float
    response_std: float

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "feature_means", _frozen_array(self.feature_means, 1, "means")
        )
        object.__setattr__(
            self, "feature_stds", _frozen_array(self.feature_stds, 1, "stds")
        )
        if self.feature_means.shape != self.feature_stds.shape:
            raise DimensionError("feature means and standard deviations differ in length")
        if np.any(self.feature_stds <= 0.0) or self.response_std <= 0.0:
            raise ScalingError("standard deviations must be strictly positive")

    @property
    def n_features(self) -> int:
        return int(self.feature_means.shape[0])

    def _check_width(self, x: FloatArray) -> None:
        if x.shape[-1] != self.n_features:
            raise DimensionError(
                f"expected {self.n_features} features, got {x.shape[-1]}"
            )

    def transform_features(self, x: npt.ArrayLike) -> FloatArray:
        array = np.asarray(x, dtype=np.float64)
        self._check_width(array)
        return (array - self.feature_means) / self.feature_stds

    def inverse_features(self, z: npt.ArrayLike) -> FloatArray:
        array = np.asarray(z, dtype=np.float64)
        self._check_width(array)
        return array * self.feature_stds + self.feature_means

    def transform_response(self, y: npt.ArrayLike) -> FloatArray:
        return (np.asarray(y, dtype=np.float64) - self.response_mean) / self.response_std

    def inverse_response(self, z: npt.ArrayLike) -> FloatArray:
        return np.asarray(z, dtype=np.float64) * self.response_std + self.response_mean

    def inverse_std(self, s: npt.ArrayLike) -> FloatArray:
        return np.asarray(s, dtype=np.float64) * self.response_std


@dataclass(frozen=True)
class PoolPartition:
    initial_indices: Tuple[int, ...]
    pool_indices: Tuple[int, ...]
    test_indices: Tuple[int, ...] = ()

    def complete(self, selected: Sequence[int]) -> "PoolPartition":
        """Keep `selected' as the pool and move the rest of it to test."""
        chosen = set(selected)
        missing = chosen - set(self.pool_indices)
        if missing:
            raise InvalidInputError(f"rows {sorted(missing)} are not pool candidates")
        test = sorted(set(self.pool_indices) - chosen) + list(self.test_indices)
        return PoolPartition(self.initial_indices, tuple(selected), tuple(sorted(test)))


@dataclass(frozen=True)
class KernelParams:
    lengthscale: float
    signal_variance: float
    noise_variance: float

    def __post_init__(self) -> None:
        if not (self.lengthscale > 0.0 and self.signal_variance > 0.0):
            raise InvalidInputError("lengthscale and signal variance must be positive")
        if not self.noise_variance >= 0.0:
            raise InvalidInputError("noise variance must be non-negative")

    def as_log_vector(self) -> FloatArray:
        return np.log([self.lengthscale, self.signal_variance, self.noise_variance])

    @classmethod
    def from_log_vector(cls, theta: npt.ArrayLike) -> "KernelParams":
        lengthscale, signal_variance, noise_variance = np.exp(
            np.asarray(theta, dtype=np.float64)
        )
        return cls(float(lengthscale), float(signal_variance), float(noise_variance))


@dataclass(frozen=True)
class Prediction:
    mean: float
    std: float


@dataclass(frozen=True)
class Incumbent:
    value: float
    index: int


@dataclass(frozen=True)
class ScoredCandidate:
    pool_index: int
    ei: float
    predicted_mean: float
    predicted_std: float


@dataclass(frozen=True)
class MixturePrediction:
    mean: float
    std: float
    component_means: Tuple[float, ...] = field(default_factory=tuple)
    component_stds: Tuple[float, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class CampaignResult:  # pylint: disable=too-many-instance-attributes
    """One finished campaign.

    `selected_indices' holds the initial design followed by the sequential
    picks in selection order. Weights are only recorded in BMA mode.
    """

    run_index: int
    run_seed: int
    mode: Mode
    spec_names: Tuple[str, ...]
    selected_indices: Tuple[int, ...]
    test_indices: Tuple[int, ...]
    incumbent_trajectory: Tuple[float, ...]
    test_rmse: float
    final_weights: Optional[Tuple[float, ...]] = None
    weight_trajectory: Optional[Tuple[Tuple[float, ...], ...]] = None


@dataclass(frozen=True)
class RunFailure:
    run_index: int
    run_seed: int
    message: str


RunOutcome = Union[CampaignResult, RunFailure]
