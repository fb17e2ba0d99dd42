"""Message-level simulation of a base station polling correlated sensors.

The base station knows the correlation model but never reads node data
directly; everything it learns arrives as bit strings on a lossless channel.
Each word is decoded as soon as its node answers, from earlier
reconstructions only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import huffman
from .field import CorrelationModel, FieldError, Schedule, query_cost
from .scheduling import average_case_complexity, evaluate_schedule, step_distributions


def _bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def _low(word: int, b: int) -> int:
    return word & ((1 << b) - 1)


def _splice(reference: int, low_bits: int, b: int) -> int:
    """Top bits of ``reference`` above the ``b`` received low bits."""
    return (reference >> b << b) | low_bits


@dataclass(frozen=True)
class FieldData:
    words: tuple[int, ...]
    n: int
    consistency_ok: bool

    def word(self, node: int) -> int:
        return self.words[node - 1]


def check_consistency(model: CorrelationModel, words: Sequence[int]) -> bool:
    """Every pair with ``B_ij < n`` agrees above its ``B_ij`` low bits."""
    size = model.size
    for i in range(size):
        for j in range(i + 1, size):
            b = int(model.bits[i, j])
            if b < model.n and (words[i] >> b) != (words[j] >> b):
                return False
    return True


def generate_field_data(model: CorrelationModel, seed: int) -> FieldData:
    """Draw one reading per node consistent with the correlation model.

    A shared base word supplies the high bits; node ``i`` replaces its
    ``m_i`` low bits with fresh ones, ``m_i`` being its smallest pairwise bit
    count. Any two nodes then differ only below ``max(m_i, m_j) <= B_ij``.
    """
    rng = np.random.default_rng(seed)
    n = model.n
    base = int(rng.integers(0, 1 << n))
    words = []
    for i in range(model.size):
        if model.size == 1:
            m = n
        else:
            m = int(np.min(np.delete(model.bits[i], i)))
        fresh = int(rng.integers(0, 1 << m))
        words.append(_splice(base, fresh, m))
    words = tuple(words)
    return FieldData(words, n, check_consistency(model, words))


@dataclass
class NodeAgent:
    node_id: int
    data: int
    n: int

    def __post_init__(self):
        if not (0 <= self.data < (1 << self.n)):
            raise ValueError(f"node {self.node_id}: reading {self.data} does not fit in {self.n} bits")

    def report_all(self) -> str:
        return _bits(self.data, self.n)

    def answer(self, query: str) -> str:
        b = int(query, 2) + 1
        return _bits(_low(self.data, b), b)

    def answer_coded(self, query: str, code: dict[int, str]) -> str:
        b = int(query, 2) + 1
        return code[_low(self.data, b)]


@dataclass(frozen=True)
class Message:
    direction: str  # "down" or "up"
    node: int
    bits: str

    def to_json(self) -> dict:
        return {"direction": self.direction, "node": self.node,
                "bits": self.bits, "length": len(self.bits)}


@dataclass
class BaseStation:
    model: CorrelationModel
    schedule: Schedule
    reconstructed: dict[int, int] = field(default_factory=dict)

    def encode_query(self, b: int) -> str:
        """``b - 1`` in exactly ``query_cost(b)`` bits."""
        return _bits(b - 1, query_cost(b))

    def plan(self, node: int) -> tuple[int, int]:
        return self.model.nearest(node, self.reconstructed)

    def receive_all(self, node: int, bits: str) -> None:
        self.reconstructed[node] = int(bits, 2)

    def receive_low(self, node: int, via: int, b: int, low: int) -> None:
        self.reconstructed[node] = _splice(self.reconstructed[via], low, b)


@dataclass(frozen=True)
class SimulationReport:
    transcript: tuple[Message, ...]
    total_downlink: int
    total_uplink: int
    analytic: int
    reconstruction_exact: bool
    n: int

    @property
    def total(self) -> int:
        return self.total_downlink + self.total_uplink

    @property
    def analytic_match(self) -> bool:
        return self.total - self.n == self.analytic

    def summary(self) -> dict:
        return {
            "downlink": self.total_downlink,
            "uplink": self.total_uplink,
            "total": self.total,
            "analytic": self.analytic + self.n,
            "match": self.analytic_match,
            "exact": self.reconstruction_exact,
        }


def _start(model, schedule, field_data):
    if not isinstance(schedule, Schedule):
        schedule = Schedule(tuple(schedule))
    if len(schedule) != model.size:
        raise FieldError(f"schedule has {len(schedule)} nodes but the model has {model.size}")
    if len(field_data.words) != model.size or field_data.n != model.n:
        raise FieldError("field data does not match the correlation model")
    agents = {k: NodeAgent(k, field_data.word(k), model.n) for k in model.node_ids}
    return schedule, agents, BaseStation(model, schedule)


def run_poll(model: CorrelationModel, schedule, field_data: FieldData) -> SimulationReport:
    """Worst-case polling round with fixed-length low-bit replies."""
    schedule, agents, station = _start(model, schedule, field_data)
    log: list[Message] = []
    first, *rest = schedule.order
    reply = agents[first].report_all()
    log.append(Message("up", first, reply))
    station.receive_all(first, reply)
    for node in rest:
        via, b = station.plan(node)
        query = station.encode_query(b)
        log.append(Message("down", node, query))
        reply = agents[node].answer(query)
        log.append(Message("up", node, reply))
        station.receive_low(node, via, b, int(reply, 2))

    down = sum(len(m.bits) for m in log if m.direction == "down")
    up = sum(len(m.bits) for m in log if m.direction == "up")
    exact = all(station.reconstructed[k] == field_data.word(k) for k in model.node_ids)
    analytic = evaluate_schedule(model, schedule).complexity
    return SimulationReport(tuple(log), down, up, analytic, exact, model.n)


@dataclass(frozen=True)
class AveragePollReport:
    trials: int
    mean: float
    std_error: float
    analytic: float
    per_step_mean_uplink: tuple[float, ...]
    all_exact: bool

    def within(self, n_se: float = 3.0) -> bool:
        return abs(self.mean - self.analytic) <= n_se * self.std_error + 1e-9

    def summary(self) -> dict:
        return {
            "trials": self.trials,
            "mean": self.mean,
            "std_error": self.std_error,
            "analytic": self.analytic,
            "per_step_mean_uplink": list(self.per_step_mean_uplink),
            "within_3se": self.within(3.0),
            "exact": self.all_exact,
        }


def run_average_poll(model: CorrelationModel, schedule, pattern_dist=None,
                     trials: int = 10_000, seed: int = 0) -> AveragePollReport:
    """Monte Carlo of polling with Huffman-coded replies.

    Per trial the first node's word is uniform; every later node copies the
    high bits of its conditioning node and draws its ``B`` low bits from that
    step's pattern distribution. Codebooks are shared ahead of time and not
    charged. ``analytic`` is ``n`` plus :func:`average_case_complexity`.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ev = evaluate_schedule(model, schedule)
    dists = step_distributions(ev.per_step_b, pattern_dist)
    codes = [huffman.huffman_code(p) for p in dists]
    decoders = [{w: sym for sym, w in code.items()} for code in codes]
    analytic = model.n + average_case_complexity(model, ev.schedule, pattern_dist)

    rng = np.random.default_rng(seed)
    order = ev.schedule.order
    steps = len(order) - 1
    patterns = np.empty((trials, steps), dtype=np.int64)
    for k, p in enumerate(dists):
        patterns[:, k] = rng.choice(p.size, size=trials, p=p)
    firsts = rng.integers(0, 1 << model.n, size=trials)

    totals = np.empty(trials)
    step_up = np.zeros(steps)
    all_exact = True
    for t in range(trials):
        words = {order[0]: int(firsts[t])}
        for k in range(steps):
            b, via = ev.per_step_b[k], ev.conditioned_on[k]
            words[order[k + 1]] = _splice(words[via], int(patterns[t, k]), b)
        agents = {k: NodeAgent(k, w, model.n) for k, w in words.items()}
        station = BaseStation(model, ev.schedule)

        reply = agents[order[0]].report_all()
        bits = len(reply)
        station.receive_all(order[0], reply)
        for k, node in enumerate(order[1:]):
            via, b = station.plan(node)
            query = station.encode_query(b)
            reply = agents[node].answer_coded(query, codes[k])
            low = decoders[k][reply]
            station.receive_low(node, via, b, low)
            bits += len(query) + len(reply)
            step_up[k] += len(reply)
        totals[t] = bits
        all_exact &= station.reconstructed == words

    mean = float(totals.mean())
    se = float(totals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return AveragePollReport(trials, mean, se, analytic,
                             tuple(float(s / trials) for s in step_up), bool(all_exact))
