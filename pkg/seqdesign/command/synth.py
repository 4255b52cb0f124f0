import argparse
import sys
import warnings
from typing import List

import pandas as pd

from seqdesign.argparse import (
    HelpFormatter,
    add_basic_arguments,
    parse_count,
    parse_names,
    parse_real,
)
from seqdesign.dataset import SYNTH_FEATURES, synth_table
from seqdesign.io import open_output
from seqdesign.types import ModelSpec
from seqdesign.warnings import SeqDesignError, die, simple_warning


def get_parser() -> argparse.ArgumentParser:
    # Command-line arguments
    parser = argparse.ArgumentParser(
        prog="seqdesign-synth",
        description="Write a synthetic experiment table whose response depends on chosen columns.",
        formatter_class=HelpFormatter,
        usage="%(prog)s [OPTION...] [OUTFILE]",
        add_help=False,
        epilog="""
Features are drawn uniformly from [-2, 2]. The response is
100 + sum over the true features of 10 sin(1.5 x) + 3 x^2,
plus Gaussian noise.
""",
    )
    warnings.showwarning = simple_warning(parser.prog)

    # Command-line parser
    parser.add_argument(
        "-n",
        "--rows",
        metavar="N",
        type=parse_count(10),
        default=200,
        help="number of rows [default: %(default)s]",
    )
    parser.add_argument(
        "-t",
        "--true-features",
        metavar="LIST",
        type=parse_names,
        default=("x1", "x2", "x3"),
        help="comma-separated columns the response depends on\n[default: x1,x2,x3]",
    )
    parser.add_argument(
        "-f",
        "--features",
        metavar="LIST",
        type=parse_names,
        default=SYNTH_FEATURES,
        help=f"comma-separated column names [default: {','.join(SYNTH_FEATURES)}]",
    )
    parser.add_argument(
        "--noise",
        metavar="SD",
        type=parse_real,
        default=1.0,
        help="noise standard deviation [default: %(default)s]",
    )
    parser.add_argument(
        "--seed",
        type=parse_count(0),
        default=0,
        help="random seed [default: %(default)s]",
    )
    parser.add_argument(
        "outfile",
        metavar="OUTFILE",
        nargs="?",
        help="`-' or no OUTFILE argument means standard output",
    )
    add_basic_arguments(parser)

    return parser


# pylint: disable=dangerous-default-value
def cmd_synth(argv: List[str] = sys.argv[1:]) -> None:
    args = get_parser().parse_intermixed_args(argv)

    try:
        table = synth_table(
            args.rows,
            ModelSpec("true", args.true_features),
            args.noise,
            args.seed,
            args.features,
        )
        frame = pd.DataFrame(table.rows, columns=list(table.feature_names))
        frame[table.response_name] = table.responses
        with open_output(args.outfile) as outfile:
            frame.to_csv(outfile, index=False, lineterminator="\n", float_format="%.6f")
    except SeqDesignError as exc:
        die(str(exc))


if __name__ == "__main__":
    cmd_synth()
