"""
seqdesign model-spec configuration files.

A config is a YAML mapping with an optional `schema' (table columns) and a
list of `models', each with a `name', a `features' list and an optional
`prior' in (0, 1]. Models without a prior share what the explicit priors
leave, equally; with no explicit priors that is 1/L each. When every model
has a prior the priors are normalized to sum to one.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import yaml

from .types import NIMS_SCHEMA, ExperimentTable, ModelSpec, TableSchema
from .warnings import InvalidInputError, SchemaError, SpecError

TOP_LEVEL_KEYS = frozenset({"schema", "models"})
SCHEMA_KEYS = frozenset({"features", "response"})
MODEL_KEYS = frozenset({"name", "features", "prior"})


@dataclass(frozen=True)
class SpecConfig:
    schema: TableSchema
    models: Tuple[ModelSpec, ...]

    def select(self, name: str) -> ModelSpec:
        for spec in self.models:
            if spec.name == name:
                return spec
        known = ", ".join(f"`{spec.name}'" for spec in self.models)
        raise SpecError(f"no model named `{name}' (have {known})")


def _unknown_keys(mapping: Dict[str, Any], allowed: frozenset[str], where: str) -> None:
    extra = sorted(set(mapping) - allowed)
    if extra:
        names = ", ".join(f"`{key}'" for key in extra)
        raise SpecError(f"{where}: unknown key(s) {names}")


def _string_list(value: Any, where: str) -> Tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SpecError(f"{where}: `features' must be a list of column names")
    return tuple(value)


def _parse_schema(raw: Any) -> TableSchema:
    if raw is None:
        return NIMS_SCHEMA
    if not isinstance(raw, dict):
        raise SpecError("`schema' must be a mapping")
    _unknown_keys(raw, SCHEMA_KEYS, "schema")
    if "features" not in raw:
        raise SpecError("schema: missing `features'")
    response = raw.get("response", NIMS_SCHEMA.response)
    if not isinstance(response, str):
        raise SpecError("schema: `response' must be a column name")
    try:
        return TableSchema(_string_list(raw["features"], "schema"), response)
    except SchemaError as exc:
        raise SpecError(f"schema: {exc}") from exc


def _resolve_priors(explicit: Sequence[Optional[float]]) -> List[float]:
    given = [p for p in explicit if p is not None]
    missing = len(explicit) - len(given)
    if missing == 0:
        total = sum(given)
        return [p / total for p in given]
    remainder = 1.0 - sum(given)
    if remainder <= 0.0:
        raise SpecError("explicit priors leave no probability for the other models")
    share = remainder / missing
    return [share if p is None else p for p in explicit]


def parse_specs(document: Any) -> SpecConfig:
    if not isinstance(document, dict):
        raise SpecError("config must be a mapping with a `models' list")
    _unknown_keys(document, TOP_LEVEL_KEYS, "config")
    schema = _parse_schema(document.get("schema"))
    models = document.get("models")
    if not isinstance(models, list) or len(models) == 0:
        raise SpecError("config needs a non-empty `models' list")

    names: List[str] = []
    features: List[Tuple[str, ...]] = []
    priors: List[Optional[float]] = []
    for position, entry in enumerate(models, start=1):
        if not isinstance(entry, dict):
            raise SpecError(f"model {position} must be a mapping")
        name = entry.get("name", f"model{position}")
        if not isinstance(name, str):
            raise SpecError(f"model {position}: `name' must be a string")
        where = f"model `{name}'"
        _unknown_keys(entry, MODEL_KEYS, where)
        if "features" not in entry:
            raise SpecError(f"{where}: missing `features'")
        features.append(_string_list(entry["features"], where))
        prior = entry.get("prior")
        if prior is not None and (
            isinstance(prior, bool) or not isinstance(prior, (int, float))
        ):
            raise SpecError(f"{where}: `prior' must be a number")
        names.append(name)
        priors.append(None if prior is None else float(prior))
    if len(set(names)) != len(names):
        raise SpecError("model names must be unique")
    for name, prior in zip(names, priors):
        if prior is not None and not 0.0 < prior <= 1.0:
            raise SpecError(f"model `{name}': prior weight must be in (0, 1], got {prior}")

    specs = tuple(
        ModelSpec(name, feature_list, prior)
        for name, feature_list, prior in zip(names, features, _resolve_priors(priors))
    )
    return SpecConfig(schema, specs)


def load_specs(path: str) -> SpecConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            document = yaml.safe_load(fh)
    except OSError as exc:
        raise SpecError(f"cannot open spec config {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise SpecError(f"cannot parse spec config {path}: {exc}") from exc
    return parse_specs(document)


def check_coverage(table: ExperimentTable, specs: Sequence[ModelSpec]) -> List[str]:
    """Problems with running `specs' on `table', as messages."""
    problems = []
    for spec in specs:
        for feature in spec.features:
            if feature not in table.feature_names:
                problems.append(f"model `{spec.name}': unknown feature `{feature}'")
    return problems


def check_budget(table: ExperimentTable, budget: int) -> List[str]:
    if budget < 1:
        raise InvalidInputError(f"budget must be positive, got {budget}")
    if table.n_rows <= budget:
        return [f"budget {budget} leaves no test rows in a table of {table.n_rows} rows"]
    return []
