import argparse
import sys
import warnings
from typing import List
from warnings import warn

from seqdesign.argparse import (
    HelpFormatter,
    add_basic_arguments,
    add_data_arguments,
    add_protocol_arguments,
)
from seqdesign.config import check_budget, check_coverage, load_specs
from seqdesign.dataset import load_table
from seqdesign.io import open_table_source
from seqdesign.warnings import SeqDesignError, die, simple_warning


def get_parser() -> argparse.ArgumentParser:
    # Command-line arguments
    parser = argparse.ArgumentParser(
        prog="seqdesign-validate",
        description="Check an experiment table and model-spec config before a run.",
        formatter_class=HelpFormatter,
        usage="%(prog)s [OPTION...] --data FILE --specs FILE",
        add_help=False,
        epilog="""
Checks that the table has every schema column, that every model's
features are columns of the table, and that the budget
(N-INIT + BATCH * ITERS) leaves rows to test on.
""",
    )
    warnings.showwarning = simple_warning(parser.prog)

    # Command-line parser
    add_data_arguments(parser)
    add_protocol_arguments(parser)
    add_basic_arguments(parser)

    return parser


# pylint: disable=dangerous-default-value
def cmd_validate(argv: List[str] = sys.argv[1:]) -> None:
    args = get_parser().parse_intermixed_args(argv)

    try:
        config = load_specs(args.specs)
        with open_table_source(args.data) as source:
            table = load_table(source, config.schema, args.delimiter)
    except SeqDesignError as exc:
        die(str(exc))

    budget = args.n_init + args.batch * args.iters
    problems = check_coverage(table, config.models) + check_budget(table, budget)
    for problem in problems:
        warn(problem)
    if problems:
        die(f"{len(problems)} problem(s) found")

    if args.verbose:
        names = ", ".join(spec.name for spec in config.models)
        print(
            f"{table.n_rows} rows, {table.n_features} features; "
            f"model(s) {names}; budget {budget}: OK"
        )


if __name__ == "__main__":
    cmd_validate()
