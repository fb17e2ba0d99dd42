import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse.csgraph import minimum_spanning_tree

from sensorpoll.field import CorrelationModel, FieldError, build_field, random_field
from sensorpoll.scheduling import (
    Method,
    average_case_complexity,
    brute_force_optimum,
    enumerate_schedules,
    evaluate_schedule,
    greedy_schedule,
    step_distributions,
)


def test_evaluate_line_field(line_model):
    ev = evaluate_schedule(line_model, (1, 2, 3))
    assert ev.per_step_b == (3, 4)
    assert ev.per_step_query == (2, 2)
    assert ev.complexity == 11
    assert ev.cost.total_with_first_node == 16
    assert ev.conditioned_on == (1, 2)

    ev = evaluate_schedule(line_model, (1, 3, 2))
    assert ev.per_step_b == (5, 3)
    assert ev.per_step_query == (3, 2)
    assert ev.complexity == 13


def test_cost_breakdown_accounting(line_model):
    cost = evaluate_schedule(line_model, (2, 3, 1)).cost
    assert cost.per_node[0].downlink == 0 and cost.per_node[0].uplink == 5
    assert cost.complexity == cost.downlink + cost.uplink - 5
    assert cost.total_with_first_node == cost.complexity + 5


def test_single_node():
    m = CorrelationModel.from_field(build_field([(1, (0, 0))], n=4))
    ev = evaluate_schedule(m, (1,))
    assert ev.complexity == 0 and ev.cost.total_with_first_node == 4
    g = greedy_schedule(m)
    assert g.best_schedule.order == (1,) and g.best_cost == 0
    assert brute_force_optimum(m).evaluated_count == 1


def test_evaluate_rejects_bad_schedule(line_model):
    with pytest.raises(FieldError):
        evaluate_schedule(line_model, (1, 2))
    with pytest.raises(FieldError):
        evaluate_schedule(line_model, (1, 1, 2))


def test_brute_force_line_field(line_model):
    res = brute_force_optimum(line_model)
    assert res.best_cost == 11
    assert res.best_schedule.order == (1, 2, 3)
    assert res.evaluated_count == 6
    assert res.method is Method.BRUTE_FORCE


def test_brute_force_two_nodes():
    m = CorrelationModel.from_field(build_field([(1, (0,)), (2, (2.2,))], n=5))
    res = brute_force_optimum(m)
    assert res.best_schedule.order == (1, 2)
    assert res.best_cost == 2 + 3


def test_brute_force_refuses_large_n():
    m = CorrelationModel.from_field(random_field(np.random.default_rng(0), 11, 5))
    with pytest.raises(FieldError, match="11!"):
        brute_force_optimum(m)
    with pytest.raises(FieldError):
        brute_force_optimum(CorrelationModel.from_field(random_field(np.random.default_rng(0), 4, 5)), limit=3)


def test_greedy_line_field(line_model):
    g = greedy_schedule(line_model, 1)
    assert g.best_schedule.order == (1, 2, 3) and g.best_cost == 11
    g = greedy_schedule(line_model, 3)
    assert g.best_schedule.order == (3, 2, 1)
    assert g.evaluation.per_step_b == (4, 3)
    assert g.evaluation.per_step_query == (2, 2)
    assert g.best_cost == 11
    with pytest.raises(FieldError):
        greedy_schedule(line_model, 4)


@pytest.mark.parametrize("seed", range(8))
def test_enumeration_matches_direct_evaluation(seed):
    rng = np.random.default_rng(seed)
    m = CorrelationModel.from_field(random_field(rng, 5, int(rng.choice([3, 5, 8]))))
    listed = list(enumerate_schedules(m))
    perms = list(itertools.permutations(range(1, 6)))
    assert [o for o, _, _ in listed] == perms
    for order, cost, up in listed:
        ev = evaluate_schedule(m, order)
        assert cost == ev.complexity
        assert up == ev.uplink_sum


def test_brute_force_tie_break_is_lexicographic():
    rng = np.random.default_rng(3)
    m = CorrelationModel.from_field(random_field(rng, 5, 5))
    costs = {p: evaluate_schedule(m, p).complexity for p in itertools.permutations(range(1, 6))}
    best = min(costs.values())
    assert brute_force_optimum(m).best_schedule.order == min(p for p, c in costs.items() if c == best)


def test_greedy_equals_brute_force_on_seeded_field():
    rng = np.random.default_rng(12345)
    m = CorrelationModel.from_field(random_field(rng, 5, 5))
    assert greedy_schedule(m).best_cost == brute_force_optimum(m).best_cost


def scipy_mst_weight(model):
    w = model.bits.astype(float)
    np.fill_diagonal(w, 0)
    return int(minimum_spanning_tree(w).sum())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 7), st.sampled_from([3, 5, 8, 16]))
def test_greedy_start_invariance_and_mst(seed, size, n):
    m = CorrelationModel.from_field(random_field(np.random.default_rng(seed), size, n))
    mst = scipy_mst_weight(m)
    costs = set()
    for s in m.node_ids:
        g = greedy_schedule(m, s)
        costs.add(g.best_cost)
        assert g.evaluation.uplink_sum == mst
    assert len(costs) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6), st.sampled_from([3, 5, 8, 16]))
def test_every_schedule_uplink_at_least_mst(seed, size, n):
    m = CorrelationModel.from_field(random_field(np.random.default_rng(seed), size, n))
    mst = scipy_mst_weight(m)
    assert min(up for _, _, up in enumerate_schedules(m)) == mst


def test_wasteful_steps_are_flagged(line_model):
    # B = 4 plus 2 query bits exceeds n = 5
    ev = evaluate_schedule(line_model, (1, 2, 3))
    assert ev.wasteful_steps() == [1]
    assert ev.complexity > (line_model.size - 1) * line_model.n
    # B = n = 5 costs 3 query bits on top of 5 data bits
    assert evaluate_schedule(line_model, (1, 3, 2)).wasteful_steps() == [0]


def test_interaction_helps_when_each_step_fits():
    m = CorrelationModel.from_field(build_field([(1, (0,)), (2, (1.5,)), (3, (3,))], n=5))
    ev = evaluate_schedule(m, (1, 2, 3))
    assert ev.wasteful_steps() == []
    assert ev.complexity == 6 < 2 * 5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 7), st.sampled_from([3, 5, 8, 16]))
def test_per_step_condition_bounds_cost(seed, size, n):
    m = CorrelationModel.from_field(random_field(np.random.default_rng(seed), size, n))
    ev = greedy_schedule(m).evaluation
    if not ev.wasteful_steps():
        assert ev.complexity <= (size - 1) * n


def test_average_uniform_equals_worst(line_model):
    assert average_case_complexity(line_model, (1, 2, 3)) == 11.0
    assert average_case_complexity(line_model, (1, 3, 2), [None, None]) == 13.0


def test_average_skewed_step():
    # B = 2 step: nodes 1 and 2 at distance 1.5
    m = CorrelationModel.from_field(build_field([(1, (0,)), (2, (1.5,))], n=5))
    assert evaluate_schedule(m, (1, 2)).per_step_b == (2,)
    skew = [[0.5, 0.25, 0.125, 0.125]]
    assert average_case_complexity(m, (1, 2), skew) == 1 + 1.75
    assert average_case_complexity(m, (1, 2), [[1, 0, 0, 0]]) == 1 + 1.0
    assert average_case_complexity(m, (1, 2)) == 1 + 2


@pytest.mark.parametrize("dist, match", [
    ([[0.5, 0.5]], "need 4"),
    ([[0.5, 0.5, 0.5, -0.5]], "non-negative"),
    ([[0.3, 0.3, 0.3, 0.3]], "sum"),
    ([None, None], "expected 1"),
])
def test_malformed_distributions(dist, match):
    m = CorrelationModel.from_field(build_field([(1, (0,)), (2, (1.5,))], n=5))
    with pytest.raises(ValueError, match=match):
        average_case_complexity(m, (1, 2), dist)


def test_step_distribution_tolerance():
    p = [0.25 + 1e-11, 0.25, 0.25, 0.25]
    assert step_distributions([2], [p])[0].sum() == pytest.approx(1)
