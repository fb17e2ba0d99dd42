"""Schedule complexity, exhaustive and greedy schedule search, average case."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from . import huffman
from .field import CorrelationModel, CostBreakdown, FieldError, NodeCost, Schedule, query_cost

DEFAULT_BRUTE_FORCE_LIMIT = 10


class Method(str, Enum):
    BRUTE_FORCE = "brute_force"
    GREEDY = "greedy"


@dataclass(frozen=True)
class ScheduleEvaluation:
    schedule: Schedule
    cost: CostBreakdown
    per_step_b: tuple[int, ...]
    per_step_query: tuple[int, ...]
    conditioned_on: tuple[int, ...]

    @property
    def complexity(self) -> int:
        return self.cost.complexity

    @property
    def uplink_sum(self) -> int:
        """Uplink bits of every node after the first."""
        return sum(self.per_step_b)

    def wasteful_steps(self) -> list[int]:
        """Step indices (0-based, after the first node) where querying costs
        more than letting the node send all ``n`` bits unasked."""
        n = self.cost.n
        return [k for k, (b, q) in enumerate(zip(self.per_step_b, self.per_step_query))
                if b + q > n]

    def table(self) -> list[dict]:
        rows = []
        for k, node in enumerate(self.schedule.order):
            c = self.cost.per_node[k]
            rows.append({
                "step": k + 1,
                "node": node,
                "conditioned_on": None if k == 0 else self.conditioned_on[k - 1],
                "b": self.cost.n if k == 0 else self.per_step_b[k - 1],
                "query_bits": c.downlink,
                "uplink_bits": c.uplink,
            })
        return rows


@dataclass(frozen=True)
class OptimizationResult:
    best_schedule: Schedule
    best_cost: int
    evaluated_count: int
    method: Method
    evaluation: ScheduleEvaluation


def _as_schedule(model: CorrelationModel, schedule) -> Schedule:
    if not isinstance(schedule, Schedule):
        schedule = Schedule(tuple(schedule))
    if len(schedule) != model.size:
        raise FieldError(f"schedule has {len(schedule)} nodes but the model has {model.size}")
    return schedule


def evaluate_schedule(model: CorrelationModel, schedule: Schedule | Sequence[int]) -> ScheduleEvaluation:
    """Worst-case bit accounting of polling in the given order.

    Every node after the first is queried with ``query_cost(B)`` bits and
    answers with its ``B`` least significant bits, ``B`` being its
    conditional bit count given all nodes polled before it.
    """
    schedule = _as_schedule(model, schedule)
    order = schedule.order
    per_node = [NodeCost(order[0], 0, model.n)]
    bs, qs, via = [], [], []
    for k in range(1, len(order)):
        j, b = model.nearest(order[k], order[:k])
        q = query_cost(b)
        bs.append(b)
        qs.append(q)
        via.append(j)
        per_node.append(NodeCost(order[k], q, b))
    return ScheduleEvaluation(schedule, CostBreakdown(tuple(per_node), model.n),
                              tuple(bs), tuple(qs), tuple(via))


def enumerate_schedules(model: CorrelationModel) -> Iterator[tuple[tuple[int, ...], int, int]]:
    """Yield ``(order, complexity, uplink_sum)`` for all ``N!`` schedules.

    Orders come out lexicographically. Costs are accumulated along shared
    prefixes, so this is much cheaper than calling :func:`evaluate_schedule`
    on every permutation.
    """
    size = model.size
    rows = [[int(v) for v in row] for row in model.bits]
    step_cost = {b: query_cost(b) + b for b in range(1, model.n + 1)}
    order: list[int] = []
    used = [False] * size

    def extend(best: list[int], cost: int, up: int):
        if len(order) == size:
            yield tuple(k + 1 for k in order), cost, up
            return
        for k in range(size):
            if used[k]:
                continue
            b = best[k]
            row = rows[k]
            used[k] = True
            order.append(k)
            yield from extend([min(x, y) for x, y in zip(best, row)],
                              cost + step_cost[b], up + b)
            order.pop()
            used[k] = False

    for first in range(size):
        used[first] = True
        order.append(first)
        yield from extend(list(rows[first]), 0, 0)
        order.pop()
        used[first] = False


def brute_force_optimum(model: CorrelationModel, limit: int = DEFAULT_BRUTE_FORCE_LIMIT) -> OptimizationResult:
    """Minimum worst-case complexity over all ``N!`` schedules.

    Ties go to the lexicographically smallest schedule.
    """
    if model.size > limit:
        raise FieldError(
            f"brute force over {model.size}! = {math.factorial(model.size)} schedules "
            f"exceeds the limit N <= {limit}"
        )
    best_order, best_cost, count = None, None, 0
    for order, cost, _ in enumerate_schedules(model):
        count += 1
        if best_cost is None or cost < best_cost:
            best_order, best_cost = order, cost
    ev = evaluate_schedule(model, best_order)
    return OptimizationResult(ev.schedule, best_cost, count, Method.BRUTE_FORCE, ev)


def greedy_schedule(model: CorrelationModel, start: int = 1) -> OptimizationResult:
    """Prim-style order: keep appending the unpolled node with the fewest
    conditional bits given the polled set (smallest id on ties)."""
    if not (1 <= start <= model.size):
        raise FieldError(f"start node {start} is not in 1..{model.size}")
    bits = model.bits
    order = [start]
    best = bits[start - 1].copy()
    remaining = set(model.node_ids) - {start}
    while remaining:
        nxt = min(remaining, key=lambda k: (best[k - 1], k))
        order.append(nxt)
        remaining.discard(nxt)
        best = np.minimum(best, bits[nxt - 1])
    ev = evaluate_schedule(model, order)
    return OptimizationResult(ev.schedule, ev.complexity, 1, Method.GREEDY, ev)


def step_distributions(per_step_b: Sequence[int], pattern_dist=None) -> list[np.ndarray]:
    """Normalize per-step pattern distributions.

    ``pattern_dist`` is ``None`` (uniform everywhere) or a sequence with one
    entry per step after the first node; an entry is ``None`` for uniform or
    the probabilities of the ``2**B`` low-bit patterns of that step.
    """
    if pattern_dist is None:
        pattern_dist = [None] * len(per_step_b)
    if len(pattern_dist) != len(per_step_b):
        raise ValueError(
            f"expected {len(per_step_b)} step distributions, got {len(pattern_dist)}"
        )
    out = []
    for k, (b, dist) in enumerate(zip(per_step_b, pattern_dist)):
        size = 1 << b
        if dist is None:
            out.append(np.full(size, 1.0 / size))
            continue
        p = np.asarray(dist, dtype=float)
        if p.shape != (size,):
            raise ValueError(f"step {k}: need {size} pattern probabilities for B={b}, got {p.size}")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError(f"step {k}: probabilities must be finite and non-negative")
        if abs(math.fsum(p) - 1.0) > 1e-9:
            raise ValueError(f"step {k}: probabilities sum to {math.fsum(p)!r}, not 1")
        out.append(p)
    return out


def average_case_complexity(model: CorrelationModel, schedule, pattern_dist=None) -> float:
    """Query bits plus expected Huffman-coded uplink bits per step.

    Reduces to the worst-case complexity when every step is uniform.
    """
    ev = evaluate_schedule(model, schedule)
    dists = step_distributions(ev.per_step_b, pattern_dist)
    return math.fsum(ev.per_step_query) + math.fsum(huffman.expected_length(p) for p in dists)
