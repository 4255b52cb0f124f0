from pathlib import Path

from testutils import file_test, make_tests, Case
from seqdesign.command.validate import cmd_validate

TABLE3 = "../../configs/table3.yaml"

pytestmark = make_tests(
    cmd_validate,
    Path(__file__).parent.resolve() / "test-files",
    Case(
        "valid",
        ["-d", "fatigue.csv", "-s", "table3.yaml"],
        ["data/fatigue.csv", TABLE3],
    ),
    Case(
        "tab-separated",
        ["-q", "--data", "fatigue.tsv", "--specs", "table3.yaml"],
        ["data/fatigue.tsv", TABLE3],
    ),
    Case(
        "rejected-rows",
        ["-q", "-d", "fatigue-gaps.csv", "-s", "table3.yaml"],
        ["data/fatigue-gaps.csv", TABLE3],
    ),
    Case(
        "unknown-feature",
        ["-d", "fatigue.csv", "-s", "bad-feature.yaml"],
        ["data/fatigue.csv", "configs/bad-feature.yaml"],
        1,
    ),
    Case(
        "budget",
        ["-d", "fatigue.csv", "-s", "table3.yaml", "--iters", "165"],
        ["data/fatigue.csv", TABLE3],
        1,
    ),
    Case(
        "missing-column",
        ["-d", "fatigue-no-mo.csv", "-s", "table3.yaml"],
        ["data/fatigue-no-mo.csv", TABLE3],
        1,
    ),
    Case(
        "unknown-key",
        ["-d", "fatigue.csv", "-s", "unknown-key.yaml"],
        ["data/fatigue.csv", "configs/unknown-key.yaml"],
        1,
    ),
    Case(
        "missing-data",
        ["-d", "nonexistent.csv", "-s", "table3.yaml"],
        [TABLE3],
        1,
    ),
)
test_validate = file_test
