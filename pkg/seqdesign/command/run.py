import argparse
import os
import sys
import warnings
from typing import Any, Dict, List, Optional, Tuple
from warnings import warn

from seqdesign.argparse import (
    VERSION,
    HelpFormatter,
    add_basic_arguments,
    add_campaign_arguments,
    add_data_arguments,
)
from seqdesign.config import SpecConfig, check_budget, check_coverage, load_specs
from seqdesign.dataset import load_table
from seqdesign.engine import CampaignConfig, derive_seed, run_repeated
from seqdesign.evaluate import summarize
from seqdesign.gp import GpConfig
from seqdesign.io import data_digest, open_output, open_table_source
from seqdesign.results import (
    manifest_document,
    summary_document,
    write_json,
    write_results,
    write_weights,
)
from seqdesign.types import CampaignResult, Mode, ModelSpec, RunFailure
from seqdesign.warnings import SeqDesignError, die, simple_warning


def get_parser() -> argparse.ArgumentParser:
    # Command-line arguments
    parser = argparse.ArgumentParser(
        prog="seqdesign-run",
        description="Run repeated BO or BMA campaigns over an experiment table.",
        formatter_class=HelpFormatter,
        usage="%(prog)s [OPTION...] --data FILE --specs FILE",
        add_help=False,
        epilog="""
Each run draws N-INIT initial rows, then selects BATCH rows per
iteration for ITERS iterations; the rows never selected are the test
set. OUT-DIR receives results.csv, summary.json, manifest.json and,
in BMA mode, weights.csv.

The exit status is 0 if every run finished, 2 if any run failed, and
1 for bad arguments, data or configs.
""",
    )
    warnings.showwarning = simple_warning(parser.prog)

    # Command-line parser
    add_data_arguments(parser)
    add_campaign_arguments(parser)
    parser.add_argument(
        "-o",
        "--out-dir",
        metavar="DIR",
        default="results",
        help="directory for the result files [default: %(default)s]",
    )
    add_basic_arguments(parser)

    return parser


def choose_specs(
    config: SpecConfig, mode: Mode, model: Optional[str]
) -> Tuple[ModelSpec, ...]:
    if mode is Mode.BMA:
        if model is not None:
            die("--model is only used in BO mode")
        return config.models
    if model is not None:
        return (config.select(model),)
    if len(config.models) != 1:
        die(f"BO mode needs --model NAME to pick one of {len(config.models)} models")
    return config.models


def resolved_config(args: argparse.Namespace, config: CampaignConfig) -> Dict[str, Any]:
    return {
        "mode": config.mode.value,
        "models": [
            {"name": s.name, "features": list(s.features), "prior": s.prior_weight}
            for s in config.specs
        ],
        "n_init": config.n_init,
        "batch": config.batch_size,
        "iters": config.n_iterations,
        "budget": config.budget,
        "runs": args.runs,
        "acq_variant": config.acquisition.value,
        "policy": config.policy.value,
        "batch_strategy": config.batch_strategy.value,
        "warm_start": config.warm_start,
        "gp": {
            "restarts": config.gp.n_restarts,
            "candidates": config.gp.n_candidates,
            "lengthscale_bounds": list(config.gp.lengthscale_bounds),
            "signal_variance_bounds": list(config.gp.signal_variance_bounds),
            "noise_variance_bounds": list(config.gp.noise_variance_bounds),
            "max_iter": config.gp.max_iter,
        },
        "delimiter": args.delimiter,
    }


# pylint: disable=dangerous-default-value
def cmd_run(argv: List[str] = sys.argv[1:]) -> None:
    args = get_parser().parse_intermixed_args(argv)

    # Load and check inputs
    try:
        spec_config = load_specs(args.specs)
        specs = choose_specs(spec_config, args.mode, args.model)
        with open_table_source(args.data) as source:
            table = load_table(source, spec_config.schema, args.delimiter)
            source.seek(0)
            digest = data_digest(source.read())
        config = CampaignConfig(
            specs=specs,
            mode=args.mode,
            n_init=args.n_init,
            batch_size=args.batch,
            n_iterations=args.iters,
            gp=GpConfig(n_restarts=args.restarts),
            acquisition=args.acq_variant,
            policy=args.policy,
            batch_strategy=args.batch_strategy,
            warm_start=args.warm_start,
        )
    except SeqDesignError as exc:
        die(str(exc))
    problems = check_coverage(table, specs) + check_budget(table, config.budget)
    if problems:
        die(problems[0])

    # Run
    outcomes = run_repeated(
        table, config, args.runs, args.seed, n_jobs=args.jobs, verbose=args.verbose
    )
    failures = [o for o in outcomes if isinstance(o, RunFailure)]
    for failure in failures:
        warn(f"run {failure.run_index} (seed {failure.run_seed}) failed: {failure.message}")

    # Write results
    method = config.mode.value
    names = [spec.name for spec in specs]
    files = ["results.csv"]
    try:
        os.makedirs(args.out_dir, exist_ok=True)
        with open_output(os.path.join(args.out_dir, "results.csv")) as outfile:
            write_results(outfile, outcomes, method, names)
        if len(failures) < len(outcomes):
            with open_output(os.path.join(args.out_dir, "summary.json")) as outfile:
                write_json(outfile, summary_document(summarize(outcomes), method, names))
            files.append("summary.json")
        if config.mode is Mode.BMA:
            with open_output(os.path.join(args.out_dir, "weights.csv")) as outfile:
                write_weights(outfile, outcomes, names)
            files.append("weights.csv")
        manifest = manifest_document(
            resolved_config(args, config),
            args.data,
            digest,
            args.seed,
            [derive_seed(args.seed, i) for i in range(args.runs)],
            files,
            VERSION,
        )
        with open_output(os.path.join(args.out_dir, "manifest.json")) as outfile:
            write_json(outfile, manifest)
    except OSError as exc:
        die(f"cannot write results to {args.out_dir}: {exc.strerror}", 2)
    except SeqDesignError as exc:
        die(str(exc), 2)

    if args.verbose:
        finished = sum(isinstance(o, CampaignResult) for o in outcomes)
        print(f"{finished} of {len(outcomes)} run(s) finished", file=sys.stderr)
    if failures:
        die(f"{len(failures)} of {len(outcomes)} run(s) failed", 2)


if __name__ == "__main__":
    cmd_run()
