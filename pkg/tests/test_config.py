from pathlib import Path

import numpy as np
import pytest

from seqdesign.config import check_budget, check_coverage, load_specs, parse_specs
from seqdesign.types import NIMS_SCHEMA, ExperimentTable
from seqdesign.warnings import InvalidInputError, SpecError

CONFIG_DIR = Path(__file__).parent.parent.resolve() / "configs"
FIXTURE_DIR = Path(__file__).parent.resolve() / "test-files" / "configs"


def nims_table(n: int) -> ExperimentTable:
    rows = np.arange(n * 14, dtype=np.float64).reshape(n, 14)
    return ExperimentTable(NIMS_SCHEMA.features, rows, np.arange(n, dtype=np.float64), "Fatigue")


def test_shipped_model_sets() -> None:
    table3 = load_specs(str(CONFIG_DIR / "table3.yaml"))
    assert table3.schema == NIMS_SCHEMA
    assert [spec.name for spec in table3.models] == ["model1", "model2", "model3"]
    assert table3.models[0].features == ("NT", "THT", "THQCr", "DT", "TT", "TCr")
    assert all(spec.prior_weight == pytest.approx(1 / 3) for spec in table3.models)

    (all14,) = load_specs(str(CONFIG_DIR / "all14.yaml")).models
    assert set(all14.features) == set(NIMS_SCHEMA.features)
    assert all14.prior_weight == 1.0

    synthetic = load_specs(str(CONFIG_DIR / "synthetic.yaml"))
    assert synthetic.schema.response == "y"
    assert synthetic.select("matched").features == ("x1", "x2", "x3")


def test_priors_share_the_remainder() -> None:
    config = parse_specs(
        {
            "models": [
                {"name": "a", "features": ["x"], "prior": 0.5},
                {"name": "b", "features": ["y"]},
                {"name": "c", "features": ["z"]},
            ]
        }
    )
    assert [s.prior_weight for s in config.models] == [0.5, 0.25, 0.25]


def test_explicit_priors_are_normalized() -> None:
    config = parse_specs(
        {"models": [{"features": ["x"], "prior": 0.2}, {"features": ["y"], "prior": 0.6}]}
    )
    assert [s.name for s in config.models] == ["model1", "model2"]
    assert [s.prior_weight for s in config.models] == pytest.approx([0.25, 0.75])


def test_custom_schema() -> None:
    config = parse_specs(
        {"schema": {"features": ["u", "v"], "response": "w"}, "models": [{"features": ["u"]}]}
    )
    assert config.schema.features == ("u", "v")
    assert config.schema.response == "w"


@pytest.mark.parametrize(
    "document,message",
    [
        ([], "must be a mapping"),
        ({"models": []}, "non-empty `models'"),
        ({"models": [{"name": "a"}]}, "model `a': missing `features'"),
        ({"models": [{"name": "a", "features": "x"}]}, "must be a list"),
        ({"models": [{"name": "a", "features": ["x"], "prior": "high"}]}, "must be a number"),
        ({"models": [{"name": "a", "features": ["x"], "prior": 1.5}]}, r"\(0, 1\]"),
        ({"models": [{"features": ["x"]}], "extra": 1}, "config: unknown key"),
        ({"schema": {"features": ["x"], "kind": 1}, "models": [{"features": ["x"]}]},
         "schema: unknown key"),
        ({"models": [{"name": "a", "features": ["x"]}, {"name": "a", "features": ["y"]}]},
         "unique"),
        ({"models": [{"features": ["x"], "prior": 1.0}, {"features": ["y"]}]},
         "no probability"),
    ],
)
def test_bad_documents(document: object, message: str) -> None:
    with pytest.raises(SpecError, match=message):
        parse_specs(document)


def test_unknown_model_key_names_the_key() -> None:
    with pytest.raises(SpecError, match=r"^model `model1': unknown key\(s\) `prior_weight'$"):
        load_specs(str(FIXTURE_DIR / "unknown-key.yaml"))


def test_unreadable_configs(tmp_path: Path) -> None:
    with pytest.raises(SpecError, match="cannot open spec config"):
        load_specs(str(tmp_path / "missing.yaml"))
    broken = tmp_path / "broken.yaml"
    broken.write_text("models: [\n", encoding="utf-8")
    with pytest.raises(SpecError, match="cannot parse spec config"):
        load_specs(str(broken))


def test_select_lists_known_models() -> None:
    config = load_specs(str(CONFIG_DIR / "table3.yaml"))
    expected = r"no model named `nope' \(have `model1', `model2', `model3'\)"
    with pytest.raises(SpecError, match=expected):
        config.select("nope")


def test_coverage_lists_every_unknown_feature() -> None:
    config = load_specs(str(FIXTURE_DIR / "bad-feature.yaml"))
    assert check_coverage(nims_table(10), config.models) == ["model `bad': unknown feature `X9'"]
    table3 = load_specs(str(CONFIG_DIR / "table3.yaml"))
    assert check_coverage(nims_table(10), table3.models) == []


def test_budget_check() -> None:
    assert check_budget(nims_table(150), 125) == []
    assert check_budget(nims_table(150), 150) == [
        "budget 150 leaves no test rows in a table of 150 rows"
    ]
    with pytest.raises(InvalidInputError):
        check_budget(nims_table(5), 0)
