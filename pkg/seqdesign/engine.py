"""
seqdesign campaigns: seeded BO and BMA loops over a finite pool.

Seeds: run i of a repeated campaign uses derive_seed(base_seed, i). Within a
run, the partition uses the run seed directly, iteration t fits with
SeedSequence(run_seed, spawn_key=(1, t)) and the random policy draws from
SeedSequence(run_seed, spawn_key=(2,)).
"""

import sys
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed  # type: ignore

from .acquisition import find_incumbent, rank_pool, select_batch, select_random
from .bma import (
    BmaEnsemble,
    condition_ensemble,
    fit_ensemble,
    mixture_predict_many,
    rank_ensemble,
)
from .config import check_budget
from .dataset import partition
from .evaluate import rmse
from .gp import GpConfig, predict_standardized
from .types import (
    AcquisitionVariant,
    BatchStrategy,
    CampaignResult,
    ExperimentTable,
    FloatArray,
    Incumbent,
    Mode,
    ModelSpec,
    Policy,
    RunFailure,
    RunOutcome,
    ScoredCandidate,
)
from .warnings import CampaignError, InvalidInputError, SeqDesignError


def derive_seed(base_seed: int, run_index: int) -> int:
    if base_seed < 0 or run_index < 0:
        raise InvalidInputError("seeds and run indices must be non-negative")
    sequence = np.random.SeedSequence(base_seed, spawn_key=(run_index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _iteration_seed(run_seed: int, iteration: int) -> int:
    sequence = np.random.SeedSequence(run_seed, spawn_key=(1, iteration))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class CampaignConfig:  # pylint: disable=too-many-instance-attributes
    specs: Tuple[ModelSpec, ...]
    mode: Mode = Mode.BMA
    n_init: int = 5
    batch_size: int = 3
    n_iterations: int = 40
    gp: GpConfig = field(default_factory=GpConfig)
    rng_seed: int = 0
    acquisition: AcquisitionVariant = AcquisitionVariant.WEIGHTED_EI
    policy: Policy = Policy.EI
    batch_strategy: BatchStrategy = BatchStrategy.GREEDY
    warm_start: bool = False
    fit_jobs: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "specs", tuple(self.specs))
        if len(self.specs) == 0:
            raise InvalidInputError("a campaign needs at least one model spec")
        if self.mode is Mode.BO and len(self.specs) != 1:
            raise InvalidInputError(
                f"BO mode needs exactly one model spec, got {len(self.specs)}"
            )
        if len({spec.name for spec in self.specs}) != len(self.specs):
            raise InvalidInputError("model spec names must be unique")
        if self.n_init < 2:
            raise InvalidInputError(
                f"initial design needs at least 2 rows, got {self.n_init}"
            )
        if self.batch_size < 1:
            raise InvalidInputError(f"batch size must be positive, got {self.batch_size}")
        if self.n_iterations < 0:
            raise InvalidInputError(
                f"iteration count must be non-negative, got {self.n_iterations}"
            )
        if self.rng_seed < 0:
            raise InvalidInputError(f"seed must be non-negative, got {self.rng_seed}")

    @property
    def budget(self) -> int:
        return self.n_init + self.batch_size * self.n_iterations


def _rank(
    ensemble: BmaEnsemble,
    table: ExperimentTable,
    remaining: Sequence[int],
    incumbent: Incumbent,
    config: CampaignConfig,
) -> List[ScoredCandidate]:
    rows = table.rows[np.asarray(remaining, dtype=np.intp)]
    if config.mode is Mode.BO:
        return rank_pool(
            ensemble.models[0],
            rows[:, list(ensemble.columns[0])],
            remaining,
            incumbent,
            ensemble.scalings[0],
        )
    return rank_ensemble(ensemble, rows, remaining, incumbent, config.acquisition)


def _constant_liar_batch(
    ensemble: BmaEnsemble,
    table: ExperimentTable,
    remaining: Sequence[int],
    incumbent: Incumbent,
    config: CampaignConfig,
) -> List[int]:
    # Each pick is added as a fantasy observation at the incumbent value.
    batch: List[int] = []
    candidates = list(remaining)
    while len(batch) < config.batch_size and candidates:
        (pick,) = select_batch(_rank(ensemble, table, candidates, incumbent, config), 1)
        batch.append(pick)
        candidates.remove(pick)
        if len(batch) < config.batch_size and candidates:
            ensemble = condition_ensemble(ensemble, table.rows[[pick]], [incumbent.value])
    return batch


def _predict_unobserved(
    ensemble: BmaEnsemble, table: ExperimentTable, test: Sequence[int], mode: Mode
) -> FloatArray:
    rows = table.rows[np.asarray(test, dtype=np.intp)]
    if mode is Mode.BO:
        scaling = ensemble.scalings[0]
        mean, _ = predict_standardized(
            ensemble.models[0], scaling.transform_features(rows[:, list(ensemble.columns[0])])
        )
        return scaling.inverse_response(mean)
    mean, _, _, _ = mixture_predict_many(ensemble, rows)
    return mean


def run_campaign(
    table: ExperimentTable,
    config: CampaignConfig,
    run_index: int = 0,
    verbose: bool = False,
) -> CampaignResult:
    """Initialize, then fit -> score -> select -> observe until the budget is spent.

    The final model (or ensemble) is fitted on every observed row and scored
    by RMSE on all unobserved rows.
    """
    problems = check_budget(table, config.budget)
    if problems:
        raise CampaignError(problems[0])
    split = partition(table, config.n_init, config.budget, config.rng_seed)
    observed = list(split.initial_indices)
    remaining = list(split.pool_indices)
    random_rng = np.random.default_rng(np.random.SeedSequence(config.rng_seed, spawn_key=(2,)))

    incumbent = find_incumbent(table.responses, observed)
    incumbents = [incumbent.value]
    weights: List[Tuple[float, ...]] = []
    previous: Optional[BmaEnsemble] = None

    def fit(iteration: int) -> BmaEnsemble:
        start = previous.kernel_params() if config.warm_start and previous else None
        return fit_ensemble(
            table,
            observed,
            config.specs,
            config.gp,
            _iteration_seed(config.rng_seed, iteration),
            initial_params=start,
            n_jobs=config.fit_jobs,
        )

    for iteration in range(config.n_iterations):
        if len(remaining) < config.batch_size:
            raise CampaignError(
                f"pool exhausted at iteration {iteration + 1}: "
                f"{len(remaining)} candidate(s) left for a batch of {config.batch_size}"
            )
        if config.policy is Policy.RANDOM:
            batch = select_random(remaining, config.batch_size, random_rng)
        else:
            previous = fit(iteration)
            weights.append(tuple(float(w) for w in previous.weights))
            if config.batch_strategy is BatchStrategy.CONSTANT_LIAR:
                batch = _constant_liar_batch(previous, table, remaining, incumbent, config)
            else:
                ranked = _rank(previous, table, remaining, incumbent, config)
                batch = select_batch(ranked, config.batch_size)
        observed.extend(batch)
        chosen = set(batch)
        remaining = [i for i in remaining if i not in chosen]
        incumbent = find_incumbent(table.responses, observed)
        incumbents.append(incumbent.value)
        if verbose:
            sys.stderr.write(f"[{iteration + 1}] ")

    final = fit(config.n_iterations)
    weights.append(tuple(float(w) for w in final.weights))
    split = split.complete(observed[config.n_init :])
    predictions = _predict_unobserved(final, table, split.test_indices, config.mode)
    test_rmse = rmse(table.responses[np.asarray(split.test_indices, dtype=np.intp)], predictions)
    if verbose:
        print(f"\nRun {run_index}: RMSE {test_rmse:.6g}", file=sys.stderr)

    bma = config.mode is Mode.BMA
    return CampaignResult(
        run_index=run_index,
        run_seed=config.rng_seed,
        mode=config.mode,
        spec_names=tuple(spec.name for spec in config.specs),
        selected_indices=tuple(observed),
        test_indices=split.test_indices,
        incumbent_trajectory=tuple(incumbents),
        test_rmse=test_rmse,
        final_weights=weights[-1] if bma else None,
        weight_trajectory=tuple(weights) if bma else None,
    )


def _run_one(
    table: ExperimentTable, config: CampaignConfig, run_index: int, verbose: bool
) -> RunOutcome:
    try:
        return run_campaign(table, config, run_index, verbose)
    except SeqDesignError as exc:
        return RunFailure(run_index, config.rng_seed, str(exc))


def run_repeated(
    table: ExperimentTable,
    config: CampaignConfig,
    n_runs: int,
    base_seed: int,
    n_jobs: int = 1,
    verbose: bool = False,
) -> List[RunOutcome]:
    """Run `n_runs' campaigns with derived seeds, ordered by run index.

    A run that fails is returned as a RunFailure in its slot; the others
    still complete.
    """
    if n_runs < 1:
        raise InvalidInputError(f"need at least one run, got {n_runs}")
    configs = [
        replace(config, rng_seed=derive_seed(base_seed, run_index))
        for run_index in range(n_runs)
    ]
    outcomes: List[RunOutcome] = Parallel(n_jobs=n_jobs)(
        delayed(_run_one)(table, run_config, run_index, verbose)
        for run_index, run_config in enumerate(configs)
    )
    return outcomes
