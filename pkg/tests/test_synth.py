from pathlib import Path

from testutils import file_test, make_tests, Case
from seqdesign.command.synth import cmd_synth

pytestmark = make_tests(
    cmd_synth,
    Path(__file__).parent.resolve() / "test-files",
    Case("default", ["--seed", "3", "synthetic.csv"], output="synthetic.csv"),
    Case(
        "custom-columns",
        ["-n", "20", "-f", "a,b,c", "-t", "a,d", "--noise", "0", "table.csv"],
        output="table.csv",
    ),
    Case("too-few-rows", ["--rows", "5", "table.csv"], error=1),
    Case("negative-noise", ["--noise", "-1", "table.csv"], error=1),
    Case("bad-columns", ["--features", "x1,,x2", "table.csv"], error=1),
)
test_synth = file_test
