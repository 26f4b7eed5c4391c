import itertools

import numpy as np
import pytest
from pytest import approx

from algorithms.gaps import gap_summary, ranked_arms, suboptimality_gap, validate_assignment
from errors import DomainError
from models.instances import Assignment, EgalMabInstance


def test_gap_summary_paired_means(paired_bernoulli):
    summary = gap_summary(paired_bernoulli, 2)
    assert summary.mu_star == approx(1.6)
    assert summary.delta_min == approx(0.3)
    assert summary.delta_max == approx(0.6)
    assert summary.top_set == (1, 2)


def test_gap_summary_all_users(three_gaussian):
    summary = gap_summary(three_gaussian, 3)
    assert summary.mu_star == approx(1.6)
    assert summary.delta_max == 0.0
    assert summary.delta_min is None


def test_gap_summary_single_user(three_gaussian):
    summary = gap_summary(three_gaussian, 1)
    assert summary.delta_min == approx(0.4)
    assert summary.delta_max == approx(0.7)
    assert summary.top_set == (1,)


def test_gap_summary_tied_boundary_has_no_delta_min():
    summary = gap_summary(EgalMabInstance.bernoulli([0.5, 0.7, 0.5]), 2)
    assert summary.delta_min is None
    assert summary.top_set == (1, 2)


def test_ranked_arms_ties_by_index():
    assert ranked_arms(EgalMabInstance.bernoulli([0.5, 0.9, 0.5, 0.9])) == [2, 4, 1, 3]


@pytest.mark.parametrize("U", [0, 4])
def test_gap_summary_rejects_bad_users(three_gaussian, U):
    with pytest.raises(DomainError):
        gap_summary(three_gaussian, U)


@pytest.mark.parametrize(
    "arm_set, expected",
    [((1, 2), 0.0), ((3, 4), 0.6), ((2, 3), 0.3)],
)
def test_suboptimality_gap_paired(paired_bernoulli, arm_set, expected):
    assert suboptimality_gap(paired_bernoulli, 2, arm_set) == approx(expected)


def test_suboptimality_gap_optimal_set_is_exactly_zero(paired_bernoulli):
    assert suboptimality_gap(paired_bernoulli, 2, (1, 2)) == 0.0


def test_suboptimality_gap_mixed_set(three_gaussian):
    assert suboptimality_gap(three_gaussian, 2, (1, 3)) == approx(0.3)


@pytest.mark.parametrize("arm_set", [(1,), (1, 1), (1, 5)])
def test_suboptimality_gap_rejects_bad_sets(paired_bernoulli, arm_set):
    with pytest.raises(DomainError):
        suboptimality_gap(paired_bernoulli, 2, arm_set)


def test_gap_properties_over_all_subsets():
    rng = np.random.default_rng(2)
    for _ in range(40):
        K = int(rng.integers(1, 9))
        means = np.round(rng.uniform(0, 1, K), 1)
        instance = EgalMabInstance.bernoulli(means)
        for U in range(1, K + 1):
            summary = gap_summary(instance, U)
            assert suboptimality_gap(instance, U, summary.top_set) == 0.0
            if summary.delta_min is not None:
                assert summary.delta_max >= summary.delta_min - 1e-12
            gaps = [suboptimality_gap(instance, U, s) for s in itertools.combinations(range(1, K + 1), U)]
            assert min(gaps) >= 0.0
            assert max(gaps) <= summary.delta_max + 1e-12
            bottom_equals_top = sorted(means)[:U] == sorted(means)[K - U:]
            assert (summary.delta_max == 0.0) == bottom_equals_top


def test_validate_assignment_ok():
    ok, message = validate_assignment(Assignment((2, 4, 5)), K=5, U=3)
    assert ok
    assert message


def test_validate_assignment_duplicate():
    ok, message = validate_assignment(Assignment((1, 1)), K=3, U=2)
    assert not ok
    assert "duplicate arm 1" in message


def test_validate_assignment_out_of_range():
    ok, message = validate_assignment(Assignment((4,)), K=3, U=1)
    assert not ok
    assert "index out of range" in message


def test_validate_assignment_wrong_length():
    ok, message = validate_assignment(Assignment((1, 2)), K=3, U=3)
    assert not ok
    assert "wrong length" in message
