"""
seqdesign result files.

results.csv, one row per run:
  run            run index, from 0
  seed           run seed (derive_seed of the base seed)
  status         `ok' or `failed'
  method         `bo' or `bma'
  models         model names, space-separated
  rmse           test RMSE, shortest round-trip decimal; empty when failed
  selected       selected row indices in selection order, space-separated
  incumbents     best observed response after each iteration, space-separated
  final_weights  final model weights (BMA), space-separated
  message        failure message; empty when ok

weights.csv (BMA only), one row per run and fit:
  run, stage (1..iterations for the fits that drove selection, then
  `final'), then one column per model name.

summary.json holds the RunSummary of a results file; manifest.json holds
the resolved configuration, the data digest and the run seeds. Both carry
`schema_version'.
"""

import io
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import IO, Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .evaluate import RunSummary, summarize_values
from .types import CampaignResult, RunFailure, RunOutcome
from .warnings import SchemaError

RESULTS_SCHEMA_VERSION = 1

RESULT_FIELDS = (
    "run",
    "seed",
    "status",
    "method",
    "models",
    "rmse",
    "selected",
    "incumbents",
    "final_weights",
    "message",
)

COMPARISON_FIELDS = (
    "source",
    "method",
    "n_runs",
    "n_failed",
    "mean_rmse",
    "std_rmse",
    "min",
    "q1",
    "median",
    "q3",
    "max",
)

STATUS_OK = "ok"
STATUS_FAILED = "failed"


def _numbers(values: Sequence[Any]) -> str:
    return " ".join(repr(v) for v in values)


def _result_row(outcome: RunOutcome, method: str, models: Sequence[str]) -> Dict[str, str]:
    row = dict.fromkeys(RESULT_FIELDS, "")
    row.update(
        run=str(outcome.run_index),
        seed=str(outcome.run_seed),
        method=method,
        models=" ".join(models),
    )
    if isinstance(outcome, RunFailure):
        row.update(status=STATUS_FAILED, message=outcome.message)
    else:
        row.update(
            status=STATUS_OK,
            rmse=repr(outcome.test_rmse),
            selected=_numbers(outcome.selected_indices),
            incumbents=_numbers(outcome.incumbent_trajectory),
            final_weights=_numbers(outcome.final_weights or ()),
        )
    return row


def write_results(
    outfile: IO[str], outcomes: Sequence[RunOutcome], method: str, models: Sequence[str]
) -> None:
    frame = pd.DataFrame(
        [_result_row(outcome, method, models) for outcome in outcomes],
        columns=list(RESULT_FIELDS),
    )
    frame.to_csv(outfile, index=False, lineterminator="\n")


def write_weights(outfile: IO[str], outcomes: Sequence[RunOutcome], models: Sequence[str]) -> None:
    rows = []
    for outcome in outcomes:
        if not isinstance(outcome, CampaignResult) or outcome.weight_trajectory is None:
            continue
        last = len(outcome.weight_trajectory) - 1
        for stage, weights in enumerate(outcome.weight_trajectory, start=1):
            row = {"run": str(outcome.run_index), "stage": "final" if stage > last else str(stage)}
            row.update({name: repr(w) for name, w in zip(models, weights)})
            rows.append(row)
    frame = pd.DataFrame(rows, columns=["run", "stage", *models])
    frame.to_csv(outfile, index=False, lineterminator="\n")


def summary_document(summary: RunSummary, method: str, models: Sequence[str]) -> Dict[str, Any]:
    low, q1, median, q3, high = summary.quartiles
    document: Dict[str, Any] = {
        "schema_version": RESULTS_SCHEMA_VERSION,
        "method": method,
        "models": list(models),
        "n_runs": summary.n_runs,
        "n_failed": summary.n_failed,
        "mean_rmse": summary.mean_rmse,
        "std_rmse": summary.std_rmse,
        "std_defined": summary.std_defined,
        "quartiles": {"min": low, "q1": q1, "median": median, "q3": q3, "max": high},
        "per_run_rmse": list(summary.per_run_rmse),
    }
    if summary.mean_weights is not None:
        document["mean_weights"] = dict(zip(models, summary.mean_weights))
    return document


def write_json(outfile: IO[str], document: Dict[str, Any]) -> None:
    json.dump(document, outfile, indent=2, sort_keys=True)
    outfile.write("\n")


def manifest_document(
    config: Dict[str, Any],
    data_path: str,
    data_digest: str,
    base_seed: int,
    run_seeds: Sequence[int],
    files: Sequence[str],
    version: str,
    timestamp: Optional[datetime] = None,
) -> Dict[str, Any]:
    """Everything needed to repeat a `seqdesign-run' invocation."""
    created = timestamp or datetime.now(timezone.utc)
    return {
        "schema_version": RESULTS_SCHEMA_VERSION,
        "tool": "seqdesign",
        "version": version,
        "created": created.isoformat(timespec="seconds"),
        "data": {"path": data_path, "digest": data_digest},
        "config": config,
        "base_seed": base_seed,
        "run_seeds": list(run_seeds),
        "files": list(files),
    }


@dataclass(frozen=True)
class ResultsFile:
    source: str
    method: str
    models: Tuple[str, ...]
    rmse: Tuple[float, ...]
    final_weights: Tuple[Tuple[float, ...], ...]
    n_failed: int

    def summary(self) -> RunSummary:
        weights = self.final_weights if self.method == "bma" and self.final_weights else None
        return summarize_values(self.rmse, weights, n_failed=self.n_failed)


def _parse_numbers(text: str, field: str, source: str, line: int) -> Tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split())
    except ValueError as exc:
        raise SchemaError(f"{source}: line {line}: bad `{field}' value {text!r}") from exc


def read_results(infile: IO[str], source: str) -> ResultsFile:
    """Parse a results.csv, naming the first missing or malformed field."""
    try:
        frame = pd.read_csv(infile, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as exc:
        raise SchemaError(f"{source}: empty results file") from exc
    except pd.errors.ParserError as exc:
        raise SchemaError(f"{source}: cannot parse results: {exc}") from exc
    for field in RESULT_FIELDS:
        if field not in frame.columns:
            raise SchemaError(f"{source}: missing field `{field}'")
    if len(frame) == 0:
        raise SchemaError(f"{source}: no runs")

    methods = set(frame["method"])
    if len(methods) != 1 or not methods <= {"bo", "bma"}:
        raise SchemaError(f"{source}: bad `method' values {sorted(methods)}")
    rmse: List[float] = []
    weights: List[Tuple[float, ...]] = []
    n_failed = 0
    for line, record in enumerate(frame.to_dict("records"), start=2):
        if record["status"] == STATUS_FAILED:
            n_failed += 1
            continue
        if record["status"] != STATUS_OK:
            raise SchemaError(f"{source}: line {line}: bad `status' value {record['status']!r}")
        values = _parse_numbers(record["rmse"], "rmse", source, line)
        if len(values) != 1:
            raise SchemaError(f"{source}: line {line}: missing field `rmse'")
        rmse.append(values[0])
        weights.append(_parse_numbers(record["final_weights"], "final_weights", source, line))
    if not rmse:
        raise SchemaError(f"{source}: no finished runs")
    return ResultsFile(
        source=source,
        method=methods.pop(),
        models=tuple(str(frame["models"].iloc[0]).split()),
        rmse=tuple(rmse),
        final_weights=tuple(weights),
        n_failed=n_failed,
    )


def comparison_table(files: Sequence[ResultsFile]) -> pd.DataFrame:
    """One plot-ready row per results file: moments and five-number summary."""
    rows = []
    for results in files:
        summary = results.summary()
        rows.append(
            [
                results.source,
                results.method,
                summary.n_runs,
                summary.n_failed,
                summary.mean_rmse,
                summary.std_rmse,
                *summary.quartiles,
            ]
        )
    return pd.DataFrame(rows, columns=list(COMPARISON_FIELDS))


def comparison_csv(files: Sequence[ResultsFile]) -> str:
    buffer = io.StringIO()
    comparison_table(files).to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()
