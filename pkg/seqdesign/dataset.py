"""
seqdesign experiment tables: ingestion, projection, scaling and partitioning.
"""

import io
from typing import IO, List, Optional, Sequence, Tuple
from warnings import warn

import numpy as np
import numpy.typing as npt
import pandas as pd

from .types import (
    NIMS_SCHEMA,
    ExperimentTable,
    FloatArray,
    ModelSpec,
    PoolPartition,
    ScalingParams,
    TableSchema,
)
from .warnings import (
    IngestionError,
    InvalidInputError,
    ScalingError,
    SchemaError,
    SpecError,
)

SYNTH_FEATURES = tuple(f"x{i}" for i in range(1, 9))
SYNTH_RESPONSE = "y"

# Relative spread below which a training column counts as constant.
CONSTANT_TOLERANCE = 1e-12


def _detect_delimiter(text: str) -> str:
    header = text.split("\n", 1)[0]
    return "\t" if "\t" in header and "," not in header else ","


def _data_line_numbers(text: str) -> List[int]:
    # pandas skips blank lines, so count only the non-blank ones after the header
    lines = [i + 1 for i, line in enumerate(text.splitlines()) if line.strip()]
    return lines[1:]


def _format_lines(lines: Sequence[int]) -> str:
    shown = ", ".join(str(n) for n in lines[:10])
    return shown + (f" and {len(lines) - 10} more" if len(lines) > 10 else "")


def load_table(
    source: IO[bytes],
    schema: TableSchema = NIMS_SCHEMA,
    delimiter: Optional[str] = None,
) -> ExperimentTable:
    """Read a delimited table with a header row into an ExperimentTable.

    Columns are reordered to `schema'; extra columns are ignored. Rows with a
    missing or unparseable cell in a schema column are dropped with a warning
    giving their line numbers.
    """
    try:
        text = source.read().decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise IngestionError(f"input is not UTF-8 text: {exc}") from exc
    if text.strip() == "":
        raise IngestionError("input is empty")
    if delimiter is None:
        delimiter = _detect_delimiter(text)

    try:
        frame = pd.read_csv(
            io.StringIO(text),
            sep=delimiter,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError as exc:
        raise IngestionError("input has no header row") from exc
    except pd.errors.ParserError as exc:
        raise IngestionError(f"cannot parse table: {exc}") from exc
    frame.columns = [str(column).strip() for column in frame.columns]

    required = [*schema.features, schema.response]
    missing = [name for name in required if name not in frame.columns]
    if missing:
        names = ", ".join(f"`{name}'" for name in missing)
        raise SchemaError(f"missing required column(s) {names}")
    if len(frame) == 0:
        raise IngestionError("table has no data rows")

    numeric = frame[required].apply(
        lambda column: pd.to_numeric(column.str.strip(), errors="coerce")
    )
    values = numeric.to_numpy(dtype=np.float64)
    bad = ~np.all(np.isfinite(values), axis=1)
    if np.any(bad):
        line_numbers = _data_line_numbers(text)
        rejected = [
            line_numbers[i] if i < len(line_numbers) else i + 2
            for i in np.flatnonzero(bad)
        ]
        warn(
            f"rejected {len(rejected)} row(s) with missing or unparseable cells "
            f"at line(s) {_format_lines(rejected)}"
        )
        values = values[~bad]
        if values.shape[0] == 0:
            raise IngestionError("no complete data rows")

    return ExperimentTable(
        feature_names=schema.features,
        rows=values[:, :-1],
        responses=values[:, -1],
        response_name=schema.response,
    )


def project(table: ExperimentTable, spec: ModelSpec) -> ExperimentTable:
    try:
        columns = table.column_indices(spec.features)
    except SpecError as exc:
        raise SpecError(f"model `{spec.name}': {exc}") from exc
    return ExperimentTable(
        feature_names=spec.features,
        rows=table.rows[:, columns],
        responses=table.responses,
        response_name=table.response_name,
    )


def _unit_scale_constant(
    stds: FloatArray, means: FloatArray, names: Sequence[str]
) -> FloatArray:
    constant = ~(stds > CONSTANT_TOLERANCE * np.maximum(1.0, np.abs(means)))
    if np.any(constant):
        columns = ", ".join(name for name, c in zip(names, constant) if c)
        warn(f"constant column(s) {columns} in training rows; using unit scale")
        stds = np.where(constant, 1.0, stds)
    return stds


def fit_scaling(table: ExperimentTable, row_subset: Sequence[int]) -> ScalingParams:
    """z-score parameters from `row_subset' only (sample std, n - 1)."""
    rows = np.asarray(row_subset, dtype=np.intp)
    if rows.size < 2:
        raise ScalingError(
            f"need at least 2 training rows to fit scaling, got {rows.size}"
        )
    x = table.rows[rows]
    y = table.responses[rows]
    means = x.mean(axis=0)
    stds = _unit_scale_constant(x.std(axis=0, ddof=1), means, table.feature_names)
    response_mean = float(y.mean())
    (response_std,) = _unit_scale_constant(
        np.array([y.std(ddof=1)]), np.array([response_mean]), [table.response_name]
    )
    return ScalingParams(means, stds, response_mean, float(response_std))


def partition(
    table: ExperimentTable, n_init: int, budget: int, rng_seed: int
) -> PoolPartition:
    n = table.n_rows
    if n_init < 1:
        raise InvalidInputError(f"initial design size must be positive, got {n_init}")
    if budget < n_init:
        raise InvalidInputError(
            f"budget {budget} is smaller than the initial design ({n_init})"
        )
    if budget > n:
        raise InvalidInputError(f"budget {budget} exceeds the {n} available rows")
    rng = np.random.default_rng(rng_seed)
    initial = sorted(int(i) for i in rng.choice(n, size=n_init, replace=False))
    chosen = set(initial)
    pool = tuple(i for i in range(n) if i not in chosen)
    return PoolPartition(tuple(initial), pool, ())


def synthetic_response(x_true: npt.ArrayLike) -> FloatArray:
    """100 + sum over columns of 10 sin(1.5 x) + 3 x^2."""
    x = np.atleast_2d(np.asarray(x_true, dtype=np.float64))
    return 100.0 + np.sum(10.0 * np.sin(1.5 * x) + 3.0 * x**2, axis=1)


def synth_table(
    n: int,
    spec_true: ModelSpec,
    noise_std: float,
    rng_seed: int,
    feature_names: Optional[Sequence[str]] = None,
) -> ExperimentTable:
    """Random table whose response depends only on `spec_true''s columns.

    Features are Uniform(-2, 2); the response is synthetic_response of the
    true columns plus Normal(0, noise_std^2) noise.
    """
    if n < 10:
        raise InvalidInputError(f"synthetic tables need at least 10 rows, got {n}")
    if noise_std < 0.0:
        raise InvalidInputError("noise standard deviation must be non-negative")
    names: Tuple[str, ...] = tuple(feature_names or SYNTH_FEATURES)
    names += tuple(f for f in spec_true.features if f not in names)

    rng = np.random.default_rng(rng_seed)
    rows = rng.uniform(-2.0, 2.0, size=(n, len(names)))
    columns = [names.index(f) for f in spec_true.features]
    responses = synthetic_response(rows[:, columns]) + noise_std * rng.standard_normal(n)
    return ExperimentTable(names, rows, responses, SYNTH_RESPONSE)

