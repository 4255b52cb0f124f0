"""
seqdesign argparse type parsers and shared arguments.
"""

import importlib.metadata
import argparse
import math
import re
from enum import Enum
from typing import Callable, List, Tuple, Type, TypeVar

from .types import AcquisitionVariant, BatchStrategy, Mode, Policy
from .warnings import die

E = TypeVar("E", bound=Enum)


# Argument parsers
def parse_count(minimum: int) -> Callable[[str], int]:
    def _parse(text: str) -> int:
        if not re.fullmatch(r"\s*\d+\s*", text) or int(text) < minimum:
            die(f"`{text}' is not an integer >= {minimum}")
        return int(text)

    return _parse


def parse_jobs(text: str) -> int:
    # -1 means every CPU to joblib.
    if not re.fullmatch(r"\s*(-1|[1-9]\d*)\s*", text):
        die(f"`{text}' is not a positive integer or -1")
    return int(text)


def parse_real(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        die(f"`{text}' is not a number")
    if not math.isfinite(value):
        die(f"`{text}' is not a finite number")
    return value


def parse_names(text: str) -> Tuple[str, ...]:
    names = tuple(name.strip() for name in text.split(","))
    if any(name == "" for name in names):
        die(f"`{text}' is not a comma-separated list of column names")
    return names


def parse_delimiter(text: str) -> str:
    aliases = {"tab": "\t", "\\t": "\t", "comma": ","}
    delimiter = aliases.get(text.lower(), text)
    if len(delimiter) != 1:
        die(f"delimiter `{text}' must be a single character, `tab' or `comma'")
    return delimiter


def enum_choice(enum: Type[E]) -> Callable[[str], E]:
    def _parse(text: str) -> E:
        try:
            return enum(text)
        except ValueError:
            choices = ", ".join(member.value for member in enum)
            die(f"`{text}' is not one of {choices}")

    _parse.__name__ = enum.__name__
    return _parse


# Help output
# Adapted from https://stackoverflow.com/questions/23936145/
class HelpFormatter(argparse.RawTextHelpFormatter):
    def _format_action_invocation(self, action: argparse.Action) -> str:
        if not action.option_strings:
            (metavar,) = self._metavar_formatter(action, action.dest)(1)
            return metavar
        parts: List[str] = []
        if action.nargs == 0:
            # Option takes no argument, output: -s, --long
            parts.extend(action.option_strings)
        else:
            # Option takes an argument, output: -s, --long ARGUMENT
            default = action.dest.upper()
            args_string = self._format_args(action, default)
            for option_string in action.option_strings:
                parts.append(option_string)
            parts[-1] += f" {args_string}"
        # Add space at start of format string if there is no short option
        if len(action.option_strings) > 0 and action.option_strings[0][1] == "-":
            parts[-1] = "    " + parts[-1]
        return ", ".join(parts)


try:
    VERSION = importlib.metadata.version("seqdesign")
except importlib.metadata.PackageNotFoundError:
    VERSION = "0+unknown"

VERSION_BANNER = f"""\
%(prog)s {VERSION}
Pool-based sequential experiment design with Gaussian processes.
This is free software: you are free to change and redistribute it.
There is NO WARRANTY, to the extent permitted by law.
"""


def add_version_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version=VERSION_BANNER,
    )


def add_quiet_and_help_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-q",
        "--quiet",
        action="store_false",
        dest="verbose",
        help="don't show progress",
    )
    parser.add_argument(
        "--help",
        action="help",
        help="show this help message and exit",
    )


def add_basic_arguments(parser: argparse.ArgumentParser) -> None:
    add_version_argument(parser)
    add_quiet_and_help_arguments(parser)


def add_data_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-d",
        "--data",
        metavar="FILE",
        required=True,
        help="experiment table (CSV or TSV with a header row);\n`-' means standard input",
    )
    parser.add_argument(
        "-s",
        "--specs",
        metavar="FILE",
        required=True,
        help="YAML model-spec config",
    )
    parser.add_argument(
        "--delimiter",
        type=parse_delimiter,
        help="column delimiter [default: comma, or tab if the\nheader has tabs and no commas]",
    )


def add_protocol_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--n-init",
        metavar="N",
        type=parse_count(2),
        default=5,
        help="initial design size [default: %(default)s]",
    )
    parser.add_argument(
        "-b",
        "--batch",
        metavar="Q",
        type=parse_count(1),
        default=3,
        help="experiments selected per iteration [default: %(default)s]",
    )
    parser.add_argument(
        "-i",
        "--iters",
        metavar="T",
        type=parse_count(0),
        default=40,
        help="number of iterations [default: %(default)s]",
    )


def add_campaign_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-m",
        "--mode",
        type=enum_choice(Mode),
        default=Mode.BMA,
        help="`bo' (one model) or `bma' (all models) [default: bma]",
    )
    parser.add_argument(
        "--model",
        metavar="NAME",
        help="in BO mode, the model of the config to use\n[default: the only model]",
    )
    add_protocol_arguments(parser)
    parser.add_argument(
        "-r",
        "--runs",
        metavar="N",
        type=parse_count(1),
        default=20,
        help="number of repeated runs [default: %(default)s]",
    )
    parser.add_argument(
        "--seed",
        type=parse_count(0),
        default=0,
        help="base seed of the repeated runs [default: %(default)s]",
    )
    parser.add_argument(
        "--acq-variant",
        type=enum_choice(AcquisitionVariant),
        default=AcquisitionVariant.WEIGHTED_EI,
        help="BMA acquisition: `weighted-ei' or `mixture-ei'\n[default: weighted-ei]",
    )
    parser.add_argument(
        "--policy",
        type=enum_choice(Policy),
        default=Policy.EI,
        help="`ei' or the `random' control [default: ei]",
    )
    parser.add_argument(
        "--batch-strategy",
        type=enum_choice(BatchStrategy),
        default=BatchStrategy.GREEDY,
        help="`greedy' top-q or `constant-liar' [default: greedy]",
    )
    parser.add_argument(
        "--restarts",
        metavar="N",
        type=parse_count(1),
        default=5,
        help="optimizer restarts per GP fit [default: %(default)s]",
    )
    parser.add_argument(
        "--warm-start",
        action="store_true",
        help="start each fit from the previous iteration's\nhyperparameters",
    )
    parser.add_argument(
        "-j",
        "--jobs",
        metavar="N",
        type=parse_jobs,
        default=1,
        help="parallel runs (joblib; -1 means all CPUs) [default: 1]",
    )
