import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import ndtri
from scipy.stats import qmc

from seqdesign.acquisition import (
    expected_improvement,
    expected_improvement_array,
    find_incumbent,
    rank_candidates,
    rank_pool,
    select_batch,
    select_random,
    std_normal_cdf,
    std_normal_pdf,
)
from seqdesign.gp import condition
from seqdesign.types import FloatArray, Incumbent, KernelParams, ScalingParams
from seqdesign.warnings import DimensionError, InvalidInputError

reals = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
scales = st.floats(min_value=1e-3, max_value=1e2, allow_nan=False)


def test_standard_normal() -> None:
    assert float(std_normal_cdf(0.0)) == 0.5
    assert float(std_normal_pdf(0.0)) == pytest.approx(0.3989422804014327, rel=1e-12)
    assert float(std_normal_cdf(1.96)) == pytest.approx(0.9750021048517795, rel=1e-12)


def normal_draws(n_log2: int, seed: int) -> FloatArray:
    """2**n_log2 standard normal draws from a scrambled Sobol sequence."""
    points = qmc.Sobol(d=1, scramble=True, seed=seed).random_base2(m=n_log2)
    return np.asarray(ndtri(points[:, 0]), dtype=np.float64)


def test_ei_matches_monte_carlo() -> None:
    z = normal_draws(20, 17)
    rng = np.random.default_rng(17)
    # Gap between mean and incumbent kept within 2.5 std so samples improve.
    triples = [(0.3, 0.7, 0.1)] + [
        (mean, std, mean - std * rng.uniform(-2.5, 2.5))
        for mean, std in zip(rng.normal(0, 2, size=99), rng.uniform(0.05, 3.0, size=99))
    ]
    for mean, std, best in triples:
        samples = np.maximum(mean + std * z - best, 0.0)
        error = samples.std() / np.sqrt(samples.size)
        assert error > 0.0
        assert abs(expected_improvement(mean, std, best) - samples.mean()) <= 3 * error


@given(reals, reals)
def test_ei_without_uncertainty_is_plain_improvement(mean: float, best: float) -> None:
    assert expected_improvement(mean, 0.0, best) == max(mean - best, 0.0)


@given(reals, scales, reals)
def test_ei_is_non_negative_and_above_plain_improvement(
    mean: float, std: float, best: float
) -> None:
    ei = expected_improvement(mean, std, best)
    assert ei >= 0.0
    assert ei >= max(mean - best, 0.0) - 1e-9 * max(1.0, abs(mean - best))


@given(reals, scales, reals, st.floats(min_value=0.0, max_value=10.0))
def test_ei_increases_with_mean(mean: float, std: float, best: float, step: float) -> None:
    assert expected_improvement(mean + step, std, best) >= expected_improvement(
        mean, std, best
    ) - 1e-9


@given(reals, scales, reals, st.floats(min_value=-100.0, max_value=100.0))
def test_ei_is_translation_invariant(
    mean: float, std: float, best: float, shift: float
) -> None:
    assert expected_improvement(mean + shift, std, best + shift) == pytest.approx(
        expected_improvement(mean, std, best), rel=1e-6, abs=1e-6
    )


def test_ei_rejects_bad_inputs() -> None:
    with pytest.raises(InvalidInputError):
        expected_improvement(0.0, -1.0, 0.0)
    with pytest.raises(InvalidInputError):
        expected_improvement_array([0.0, np.nan], [1.0, 1.0], 0.0)


def test_incumbent_ties_go_to_the_smallest_index() -> None:
    responses = np.array([3.0, 7.0, 1.0, 7.0, 2.0])
    assert find_incumbent(responses, [4, 3, 1]) == Incumbent(7.0, 1)
    assert find_incumbent(responses, [0, 2]) == Incumbent(3.0, 0)
    with pytest.raises(InvalidInputError):
        find_incumbent(responses, [])


def test_ranking_breaks_ties_by_index() -> None:
    ranked = rank_candidates([9, 4, 6, 2], [0.5, 1.0, 0.5, 0.0], [0, 0, 0, 0], [1, 1, 1, 1])
    assert [c.pool_index for c in ranked] == [4, 6, 9, 2]
    assert select_batch(ranked, 2) == [4, 6]
    assert select_batch(ranked, 10) == [4, 6, 9, 2]
    with pytest.raises(InvalidInputError):
        select_batch(ranked, 0)
    with pytest.raises(InvalidInputError):
        rank_candidates([], [], [], [])
    with pytest.raises(DimensionError):
        rank_candidates([1, 2], [0.5], [0], [1])


def test_single_pick_is_the_ei_argmax() -> None:
    rng = np.random.default_rng(1)
    X = rng.uniform(-2, 2, size=(8, 2))
    y = np.sin(X[:, 0]) + X[:, 1]
    model = condition(X, y, KernelParams(1.0, 1.0, 1e-4))
    scaling = ScalingParams(np.zeros(2), np.ones(2), 0.0, 1.0)
    pool = rng.uniform(-2, 2, size=(30, 2))
    indices = list(range(100, 130))
    ranked = rank_pool(model, pool, indices, find_incumbent(y, range(8)), scaling)
    scores = [c.ei for c in ranked]
    assert scores == sorted(scores, reverse=True)
    by_index = sorted(ranked, key=lambda c: c.pool_index)
    best = int(np.argmax([c.ei for c in by_index]))
    assert select_batch(ranked, 1) == [by_index[best].pool_index]


def test_rank_pool_reports_original_units() -> None:
    X = np.array([[0.0], [1.0], [2.0]])
    model = condition(X, np.array([-1.0, 0.0, 1.0]), KernelParams(1.0, 1.0, 1e-6))
    scaling = ScalingParams(np.zeros(1), np.ones(1), 100.0, 10.0)
    (candidate,) = rank_pool(model, [[1.0]], [5], Incumbent(110.0, 2), scaling)
    assert candidate.pool_index == 5
    assert candidate.predicted_mean == pytest.approx(100.0, abs=1e-3)
    assert candidate.predicted_std < 0.1


def test_random_selection() -> None:
    pool = list(range(10, 30))
    first = select_random(pool, 3, np.random.default_rng(4))
    assert first == select_random(pool, 3, np.random.default_rng(4))
    assert len(set(first)) == 3
    assert set(first) <= set(pool)
    assert sorted(select_random([1, 2], 5, np.random.default_rng(0))) == [1, 2]
