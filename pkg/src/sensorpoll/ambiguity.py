"""Support sets, ambiguity and the log-ambiguity lower bound."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, Iterable, NamedTuple

from .league import LeagueConfig, all_matches, ceil_log2


@dataclass(frozen=True)
class SupportRelation:
    """Finite set of jointly possible ``(x, y)`` values.

    Ambiguity is always about the first coordinate given the second.
    """

    pairs: frozenset
    labels: tuple[str, str] = ("x", "y")

    def __post_init__(self):
        pairs = frozenset(self.pairs)
        if not pairs:
            raise ValueError("a support relation cannot be empty")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def of(cls, pairs: Iterable[tuple[Hashable, Hashable]], labels=("x", "y")) -> "SupportRelation":
        return cls(frozenset(pairs), tuple(labels))

    @property
    def x_support(self) -> frozenset:
        return frozenset(x for x, _ in self.pairs)

    @property
    def y_support(self) -> frozenset:
        return frozenset(y for _, y in self.pairs)

    def fibers(self) -> dict:
        out = defaultdict(set)
        for x, y in self.pairs:
            out[y].add(x)
        return out

    def relabel(self, fx, fy) -> "SupportRelation":
        return SupportRelation(frozenset((fx(x), fy(y)) for x, y in self.pairs), self.labels)

    def __len__(self):
        return len(self.pairs)


def ambiguity_set(rel: SupportRelation, y) -> frozenset:
    """All ``x`` that can occur together with the observed ``y``."""
    xs = frozenset(x for x, yy in rel.pairs if yy == y)
    if not xs:
        raise KeyError(f"{y!r} is outside the support of {rel.labels[1]}")
    return xs


@dataclass(frozen=True)
class AmbiguityReport:
    per_y: dict
    max_ambiguity: int
    lower_bound_bits: int

    def to_json(self, include_per_y: bool = True) -> dict:
        doc = {"max_ambiguity": self.max_ambiguity,
               "lower_bound_bits": self.lower_bound_bits,
               "support_size_y": len(self.per_y)}
        if include_per_y:
            doc["per_y"] = [{"y": _jsonable(y), "ambiguity": mu}
                            for y, mu in sorted(self.per_y.items(), key=lambda kv: repr(kv[0]))]
        return doc


def _jsonable(v):
    if isinstance(v, (tuple, list, frozenset, set)):
        items = sorted(v, key=repr) if isinstance(v, (frozenset, set)) else v
        return [_jsonable(u) for u in items]
    return v


def max_ambiguity(rel: SupportRelation) -> AmbiguityReport:
    """Largest ambiguity over the ``y`` support and its ``ceil(log2)`` bound."""
    per_y = {y: len(xs) for y, xs in rel.fibers().items()}
    mu = max(per_y.values())
    return AmbiguityReport(per_y, mu, ceil_log2(mu))


class LeagueSupports(NamedTuple):
    y_given_x: SupportRelation
    z_given_xy: SupportRelation
    z_given_x: SupportRelation
    y_given_xz: SupportRelation


def build_league_supports(groups: int, teams: int) -> LeagueSupports:
    """The four league support sets, enumerated from every possible match.

    * teams ``(k, l)`` against the (unordered) group pair;
    * winner ``k`` against the two teams ``(m, n)``;
    * winner ``k`` against the group pair;
    * a team ``k`` of the non-winning group against that group.
    """
    cfg = LeagueConfig(groups, teams)
    yx, zxy, zx, yxz = set(), set(), set(), set()
    for m in all_matches(cfg):
        gp = (m.group_i, m.group_j)
        tp = (m.team_i, m.team_j)
        yx.add((tp, gp))
        zxy.add((m.winner, tp))
        zx.add((m.winner, gp))
        yxz.add((m.loser, m.loser.group))
    return LeagueSupports(
        SupportRelation.of(yx, ("teams", "groups")),
        SupportRelation.of(zxy, ("winner", "teams")),
        SupportRelation.of(zx, ("winner", "groups")),
        SupportRelation.of(yxz, ("team", "non-winner group")),
    )


def league_joint_support(groups: int, teams: int) -> SupportRelation:
    """Teams and winner together, against the group pair."""
    cfg = LeagueConfig(groups, teams)
    return SupportRelation.of(
        (((m.team_i, m.team_j), m.winner), (m.group_i, m.group_j)) for m in all_matches(cfg)
    )
