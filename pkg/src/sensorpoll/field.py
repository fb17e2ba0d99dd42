"""Sensor field, distance-driven correlation model and bit bookkeeping.

A node ``i`` whose data is conditioned on an already-polled node ``j`` only
has to send the ``B(i|j)`` least significant bits of its ``n``-bit reading,
where ``B(i|j) = ceil(d_ij)`` for ``d_ij <= n`` and ``n`` otherwise. With
several nodes already polled, the nearest one decides.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import jsonschema
import numpy as np


class FieldError(ValueError):
    """Raised for malformed fields, schedules and field files."""


@dataclass(frozen=True)
class SensorField:
    """Node positions plus the word length ``n`` shared by every node.

    Node ids are ``1..N``; ``positions[k]`` belongs to node ``k + 1``.
    """

    positions: np.ndarray
    n: int

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim == 1:
            pos = pos[:, None]
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    @property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(range(1, self.size + 1))

    def position(self, node: int) -> np.ndarray:
        _check_node(self.size, node)
        return self.positions[node - 1]

    def distance(self, i: int, j: int) -> float:
        return math.dist(self.position(i), self.position(j))

    def distances(self) -> np.ndarray:
        """Full ``N x N`` Euclidean distance matrix (0-based indices)."""
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return np.sqrt((diff**2).sum(axis=-1))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "nodes": [
                {"id": k, "pos": [float(c) for c in self.position(k)]}
                for k in self.node_ids
            ],
        }


def build_field(nodes: Iterable[tuple[int, Sequence[float] | float]], n: int) -> SensorField:
    """Validate ``(id, position)`` pairs and build a :class:`SensorField`.

    Ids must be exactly ``1..N`` (any order) and positions pairwise distinct,
    which keeps every conditional bit count at least 1.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise FieldError(f"word length n must be a positive integer, got {n!r}")
    nodes = list(nodes)
    if not nodes:
        raise FieldError("a field needs at least one node")

    by_id: dict[int, tuple[float, ...]] = {}
    for node_id, pos in nodes:
        if isinstance(node_id, bool) or not isinstance(node_id, (int, np.integer)):
            raise FieldError(f"node id must be an integer, got {node_id!r}")
        if node_id in by_id:
            raise FieldError(f"duplicate node id {node_id}")
        coords = np.atleast_1d(np.asarray(pos, dtype=float))
        if coords.ndim != 1 or not np.all(np.isfinite(coords)):
            raise FieldError(f"node {node_id}: position must be a finite vector")
        by_id[int(node_id)] = tuple(coords)

    expected = set(range(1, len(by_id) + 1))
    if set(by_id) != expected:
        missing = sorted(expected - set(by_id))
        extra = sorted(set(by_id) - expected)
        raise FieldError(
            f"node ids must be contiguous 1..{len(by_id)}; missing {missing}, unexpected {extra}"
        )
    dims = {len(c) for c in by_id.values()}
    if len(dims) != 1:
        raise FieldError(f"mixed position dimensions {sorted(dims)}")

    seen: dict[tuple[float, ...], int] = {}
    for node_id in sorted(by_id):
        coords = by_id[node_id]
        if coords in seen:
            raise FieldError(
                f"duplicate position {list(coords)} for nodes {seen[coords]} and {node_id}"
            )
        seen[coords] = node_id

    positions = np.array([by_id[k] for k in sorted(by_id)], dtype=float)
    return SensorField(positions, int(n))


FIELD_SCHEMA = {
    "type": "object",
    "required": ["n", "nodes"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "nodes": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "pos"],
                "properties": {
                    "id": {"type": "integer", "minimum": 1},
                    "pos": {
                        "type": "array",
                        "minItems": 1,
                        "maxItems": 3,
                        "items": {"type": "number"},
                    },
                },
            },
        },
    },
}


def field_from_json(doc: dict) -> SensorField:
    try:
        jsonschema.validate(doc, FIELD_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise FieldError(f"field schema error at {where}: {exc.message}") from None
    return build_field([(node["id"], node["pos"]) for node in doc["nodes"]], doc["n"])


def load_field(path: str | Path) -> SensorField:
    """Read a field file: ``{"n": int, "nodes": [{"id": int, "pos": [...]}, ...]}``."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FieldError(f"cannot read field file {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FieldError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    try:
        return field_from_json(doc)
    except FieldError as exc:
        raise FieldError(f"{path}: {exc}") from None


def random_field(rng: np.random.Generator, size: int, n: int, dim: int = 2,
                 extent: float | None = None) -> SensorField:
    """Uniform positions in ``[0, extent]^dim`` (default extent ``2n``)."""
    extent = 2.0 * n if extent is None else extent
    while True:
        pos = rng.uniform(0.0, extent, size=(size, dim))
        if len({tuple(p) for p in pos}) == size:
            return SensorField(pos, n)


def _check_node(size: int, node: int) -> None:
    if not (1 <= node <= size):
        raise FieldError(f"unknown node id {node} (valid ids are 1..{size})")


def bits_for_distance(d: float, n: int) -> int:
    """Conditional bit count for a pair at distance ``d``."""
    return math.ceil(d) if d <= n else n


def pairwise_bits(fld: SensorField, i: int, j: int) -> int:
    """Bits node ``i`` must send once node ``j`` is known to the base station."""
    if i == j:
        raise FieldError(f"conditioning node {i} on itself is undefined")
    return bits_for_distance(fld.distance(i, j), fld.n)


def query_cost(b: int) -> int:
    """Downlink bits for asking a node to send its ``b`` low bits.

    ``ceil(log2 b)``, except that ``b == 1`` still costs one bit.
    """
    if b < 1:
        raise FieldError(f"bit count must be >= 1, got {b}")
    return 1 if b == 1 else (int(b) - 1).bit_length()


@dataclass(frozen=True)
class CorrelationModel:
    """Symmetric ``N x N`` matrix of conditional bit counts.

    Stored 0-based; the public accessors take 1-based node ids. The diagonal
    holds ``n`` and is never read.
    """

    bits: np.ndarray
    n: int

    def __post_init__(self):
        b = np.array(self.bits, dtype=np.int64)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise FieldError("pairwise bit matrix must be square")
        off = ~np.eye(b.shape[0], dtype=bool)
        if not np.array_equal(b, b.T):
            raise FieldError("pairwise bit matrix must be symmetric")
        if np.any(b[off] < 1) or np.any(b[off] > self.n):
            raise FieldError(f"pairwise bits must lie in [1, {self.n}]")
        b.setflags(write=False)
        object.__setattr__(self, "bits", b)
        object.__setattr__(self, "_rows", tuple(tuple(int(v) for v in row) for row in b))
        object.__setattr__(self, "_ids", frozenset(range(1, b.shape[0] + 1)))

    @classmethod
    def from_field(cls, fld: SensorField) -> "CorrelationModel":
        b = np.full((fld.size, fld.size), fld.n, dtype=np.int64)
        for i, j in combinations(fld.node_ids, 2):
            b[i - 1, j - 1] = b[j - 1, i - 1] = pairwise_bits(fld, i, j)
        return cls(b, fld.n)

    @property
    def size(self) -> int:
        return self.bits.shape[0]

    @property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(range(1, self.size + 1))

    def pair(self, i: int, j: int) -> int:
        _check_node(self.size, i)
        _check_node(self.size, j)
        if i == j:
            raise FieldError(f"conditioning node {i} on itself is undefined")
        return int(self.bits[i - 1, j - 1])

    def nearest(self, i: int, polled: Iterable[int]) -> tuple[int, int]:
        """``(node, bits)`` of the already-polled node that conditions ``i`` best.

        Ties go to the smallest node id.
        """
        rows = self._rows
        if not 1 <= i <= len(rows):
            raise FieldError(f"unknown node id {i} (valid ids are 1..{len(rows)})")
        polled = set(polled)
        if not polled:
            raise FieldError("conditioning set is empty; the first node sends all n bits")
        if i in polled:
            raise FieldError(f"node {i} is already in the polled set")
        if not polled <= self._ids:
            raise FieldError(f"unknown polled node ids {sorted(polled - self._ids)}")
        row = rows[i - 1]
        best = min(polled, key=lambda j: (row[j - 1], j))
        return best, row[best - 1]


def conditional_bits(model: CorrelationModel, i: int, polled: Iterable[int]) -> int:
    """Bits node ``i`` sends given every node in ``polled`` is already known."""
    return model.nearest(i, polled)[1]


@dataclass(frozen=True)
class Schedule:
    """Polling order; a permutation of ``1..N``."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(k) for k in self.order)
        if sorted(order) != list(range(1, len(order) + 1)):
            raise FieldError(f"schedule {list(order)} is not a permutation of 1..{len(order)}")
        object.__setattr__(self, "order", order)

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)


@dataclass(frozen=True)
class NodeCost:
    node: int
    downlink: int
    uplink: int


@dataclass(frozen=True)
class CostBreakdown:
    """Per-node downlink/uplink bits for one schedule.

    ``complexity`` leaves out the first node's ``n`` uplink bits;
    ``total_with_first_node`` adds them back.
    """

    per_node: tuple[NodeCost, ...]
    n: int
    complexity: int = field(init=False)
    total_with_first_node: int = field(init=False)

    def __post_init__(self):
        rest = sum(c.downlink + c.uplink for c in self.per_node[1:])
        first = self.per_node[0].downlink if self.per_node else 0
        object.__setattr__(self, "complexity", rest + first)
        object.__setattr__(self, "total_with_first_node", rest + first + self.n)

    @property
    def downlink(self) -> int:
        return sum(c.downlink for c in self.per_node)

    @property
    def uplink(self) -> int:
        return sum(c.uplink for c in self.per_node)


def pairwise_table(fld: SensorField) -> list[tuple[int, int, float, int]]:
    """Rows ``(i, j, d_ij, B_ij)`` for every unordered pair."""
    return [
        (i, j, fld.distance(i, j), pairwise_bits(fld, i, j))
        for i, j in combinations(fld.node_ids, 2)
    ]


def correlation_curve(n: int, d_max: float | None = None, step: float = 0.05):
    """Sampled ``(d, B)`` points of the bits-versus-distance staircase."""
    d_max = 2.0 * n if d_max is None else d_max
    ds = np.arange(step, d_max + step / 2, step)
    return [(round(float(d), 10), bits_for_distance(round(float(d), 10), n)) for d in ds]
