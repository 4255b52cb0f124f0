import argparse
import sys
import warnings
from typing import List

from seqdesign.argparse import HelpFormatter, add_basic_arguments
from seqdesign.io import open_output
from seqdesign.results import ResultsFile, comparison_csv, read_results
from seqdesign.warnings import SeqDesignError, die, simple_warning


def get_parser() -> argparse.ArgumentParser:
    # Command-line arguments
    parser = argparse.ArgumentParser(
        prog="seqdesign-compare",
        description="Compare the RMSE of results files side by side.",
        formatter_class=HelpFormatter,
        usage="%(prog)s [OPTION...] RESULTS RESULTS...",
        add_help=False,
        epilog="""
Writes one CSV row per RESULTS file (a results.csv from seqdesign-run):
mean and standard deviation of the test RMSE and its five-number
summary (min, q1, median, q3, max), ready for a boxplot.
""",
    )
    warnings.showwarning = simple_warning(parser.prog)

    # Command-line parser
    parser.add_argument(
        "results",
        metavar="RESULTS",
        nargs="+",
        help="results files to compare",
    )
    parser.add_argument(
        "-o",
        "--output",
        metavar="FILE",
        help="write the table to FILE [default: standard output]",
    )
    add_basic_arguments(parser)

    return parser


# pylint: disable=dangerous-default-value
def cmd_compare(argv: List[str] = sys.argv[1:]) -> None:
    args = get_parser().parse_intermixed_args(argv)

    files: List[ResultsFile] = []
    try:
        for name in args.results:
            try:
                with open(name, encoding="utf-8") as infile:
                    files.append(read_results(infile, name))
            except OSError:
                die(f"cannot open input file {name}")
        table = comparison_csv(files)
        with open_output(args.output) as outfile:
            outfile.write(table)
    except SeqDesignError as exc:
        die(str(exc))


if __name__ == "__main__":
    cmd_compare()
