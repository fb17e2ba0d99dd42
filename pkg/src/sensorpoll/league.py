"""Three-party league protocols with bit-exact transcripts.

``X`` knows which two groups played, ``Y`` knows the two teams and ``Z``
knows the winner. ``X`` must end up knowing both teams and the winner.

Codes are fixed-width big-endian binary of 0-based indices:

* group ``g``: ``ceil(log2 N)`` bits;
* team within its group: ``ceil(log2 t)`` bits;
* globally unique team ``(g, k)``: index ``g * t + k`` in ``ceil(log2(N t))`` bits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple


def ceil_log2(m: int) -> int:
    """``ceil(log2 m)`` for integers ``m >= 1``, exact."""
    if m < 1:
        raise ValueError(f"ceil_log2 needs m >= 1, got {m}")
    return (m - 1).bit_length()


def _code(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def first_difference(a: str, b: str) -> int:
    """Index of the first (most significant) position where ``a`` and ``b`` differ."""
    for k, (p, q) in enumerate(zip(a, b)):
        if p != q:
            return k
    raise ValueError(f"codes {a!r} and {b!r} do not differ")


class LeagueError(ValueError):
    pass


class AmbiguousDecoding(LeagueError):
    """The recipient cannot single out one answer from what it received."""


@dataclass(frozen=True)
class LeagueConfig:
    groups: int
    teams: int

    def __post_init__(self):
        if self.groups < 2:
            raise LeagueError(f"need at least 2 groups for a match, got {self.groups}")
        if self.teams < 1:
            raise LeagueError(f"need at least 1 team per group, got {self.teams}")

    @property
    def group_code_len(self) -> int:
        return ceil_log2(self.groups)

    @property
    def team_code_len(self) -> int:
        return ceil_log2(self.teams)

    @property
    def global_team_code_len(self) -> int:
        return ceil_log2(self.groups * self.teams)

    @property
    def position_len(self) -> int:
        """Bits to name a position inside a group code."""
        return ceil_log2(self.group_code_len)

    @property
    def global_position_len(self) -> int:
        """Bits to name a position inside a global team code."""
        return ceil_log2(self.global_team_code_len)

    def group_code(self, g: int) -> str:
        return _code(g, self.group_code_len)

    def team_code(self, k: int) -> str:
        return _code(k, self.team_code_len)

    def global_code(self, team: "Team") -> str:
        return _code(team.group * self.teams + team.index, self.global_team_code_len)

    def team_from_global(self, bits: str) -> "Team":
        v = int(bits, 2) if bits else 0
        return Team(v // self.teams, v % self.teams)


class Team(NamedTuple):
    group: int
    index: int


@dataclass(frozen=True)
class MatchInstance:
    """One announced match; stored with ``team_i`` in the lower-numbered group."""

    team_i: Team
    team_j: Team
    winner: Team

    def __post_init__(self):
        a, b = Team(*self.team_i), Team(*self.team_j)
        if a.group == b.group:
            raise LeagueError("the two teams must come from different groups")
        if a.group > b.group:
            a, b = b, a
        w = Team(*self.winner)
        if w not in (a, b):
            raise LeagueError(f"winner {w} did not play in this match")
        object.__setattr__(self, "team_i", a)
        object.__setattr__(self, "team_j", b)
        object.__setattr__(self, "winner", w)

    @property
    def group_i(self) -> int:
        return self.team_i.group

    @property
    def group_j(self) -> int:
        return self.team_j.group

    @property
    def loser(self) -> Team:
        return self.team_j if self.winner == self.team_i else self.team_i

    def validate(self, cfg: LeagueConfig) -> None:
        for team in (self.team_i, self.team_j):
            if not (0 <= team.group < cfg.groups and 0 <= team.index < cfg.teams):
                raise LeagueError(f"team {team} is outside a league of {cfg.groups}x{cfg.teams}")


def all_matches(cfg: LeagueConfig) -> Iterator[MatchInstance]:
    for gi, gj in itertools.combinations(range(cfg.groups), 2):
        for ki, kj in itertools.product(range(cfg.teams), repeat=2):
            a, b = Team(gi, ki), Team(gj, kj)
            yield MatchInstance(a, b, a)
            yield MatchInstance(a, b, b)


@dataclass(frozen=True)
class KnowledgeState:
    x_knows: frozenset[int]
    y_knows: tuple[Team, Team]
    z_knows: Team

    @classmethod
    def from_match(cls, match: MatchInstance) -> "KnowledgeState":
        return cls(frozenset((match.group_i, match.group_j)),
                   (match.team_i, match.team_j), match.winner)


class Message(NamedTuple):
    sender: str
    bits: str
    purpose: str


PARTIES = ("X", "Y", "Z")


@dataclass(frozen=True)
class Transcript:
    messages: tuple[Message, ...]

    @property
    def per_party_bits(self) -> dict[str, int]:
        out = dict.fromkeys(PARTIES, 0)
        for m in self.messages:
            out[m.sender] += len(m.bits)
        return out

    @property
    def total_bits(self) -> int:
        return sum(len(m.bits) for m in self.messages)

    def grouped(self) -> list[tuple[str, str]]:
        """Consecutive messages of one sender concatenated into one."""
        return [(sender, "".join(m.bits for m in run))
                for sender, run in itertools.groupby(self.messages, key=lambda m: m.sender)]

    @property
    def message_count_grouped(self) -> int:
        return len(self.grouped())

    def to_json_lines(self) -> list[dict]:
        return [{"sender": m.sender, "bits": m.bits, "purpose": m.purpose}
                for m in self.messages]


class _Wire:
    """Append-only message log; receivers read bits back by known widths."""

    def __init__(self):
        self.log: list[Message] = []

    def send(self, sender: str, bits: str, purpose: str) -> str:
        self.log.append(Message(sender, bits, purpose))
        return bits

    def transcript(self) -> Transcript:
        return Transcript(tuple(self.log))


def _other_group(pair: frozenset[int], g: int) -> int:
    (other,) = pair - {g}
    return other


def _group_with_bit(cfg: LeagueConfig, pair, position: int, value: str) -> int:
    hits = [g for g in pair if cfg.group_code(g)[position] == value]
    if len(hits) != 1:
        raise AmbiguousDecoding(f"bit {position}={value} does not single out a group")
    return hits[0]


def _decode_position(bits: str) -> int:
    return int(bits, 2) if bits else 0


def _start(cfg: LeagueConfig, match: MatchInstance):
    match.validate(cfg)
    return KnowledgeState.from_match(match), _Wire()


def run_no_interaction(cfg: LeagueConfig, match: MatchInstance) -> tuple[MatchInstance, Transcript]:
    """Y names one group and both teams; Z names the winner globally. X is silent."""
    know, wire = _start(cfg, match)

    first, second = know.y_knows
    wire.send("Y", cfg.group_code(first.group) + cfg.team_code(first.index), "group and team")
    wire.send("Y", cfg.team_code(second.index), "team in the other group")
    wire.send("Z", cfg.global_code(know.z_knows), "winner")

    m1, m2, m3 = (m.bits for m in wire.log)
    g1 = int(m1[:cfg.group_code_len] or "0", 2)
    if g1 not in know.x_knows:
        raise AmbiguousDecoding(f"group {g1} did not play")
    t1 = Team(g1, int(m1[cfg.group_code_len:] or "0", 2))
    t2 = Team(_other_group(know.x_knows, g1), int(m2 or "0", 2))
    winner = cfg.team_from_global(m3)
    return MatchInstance(t1, t2, winner), wire.transcript()


def run_y_first(cfg: LeagueConfig, match: MatchInstance) -> tuple[MatchInstance, Transcript]:
    """Y is resolved against X's group pair first, then Z answers one bit."""
    know, wire = _start(cfg, match)
    gi, gj = sorted(know.x_knows)

    # X -> Y: where the two group codes first differ
    p = first_difference(cfg.group_code(gi), cfg.group_code(gj))
    p_bits = wire.send("X", _code(p, cfg.position_len), "group difference position")

    first, second = know.y_knows
    p_y = _decode_position(p_bits)
    v = wire.send("Y", cfg.group_code(first.group)[p_y], "group bit value")
    k1 = wire.send("Y", cfg.team_code(first.index), "team in that group")
    k2 = wire.send("Y", cfg.team_code(second.index), "team in the other group")

    g1 = _group_with_bit(cfg, know.x_knows, p, v)
    t1 = Team(g1, int(k1 or "0", 2))
    t2 = Team(_other_group(know.x_knows, g1), int(k2 or "0", 2))

    # X -> Z: where the two global team codes first differ
    q = first_difference(cfg.global_code(t1), cfg.global_code(t2))
    q_bits = wire.send("X", _code(q, cfg.global_position_len), "team difference position")

    q_z = _decode_position(q_bits)
    w = wire.send("Z", cfg.global_code(know.z_knows)[q_z], "winner bit value")

    winner = t1 if cfg.global_code(t1)[q] == w else t2
    return MatchInstance(t1, t2, winner), wire.transcript()


def run_z_first(cfg: LeagueConfig, match: MatchInstance) -> tuple[MatchInstance, Transcript]:
    """Z is resolved first; X then points Y at the loser's group."""
    know, wire = _start(cfg, match)
    gi, gj = sorted(know.x_knows)
    p = first_difference(cfg.group_code(gi), cfg.group_code(gj))

    p_bits = wire.send("X", _code(p, cfg.position_len), "group difference position")
    p_z = _decode_position(p_bits)
    win = know.z_knows
    v = wire.send("Z", cfg.group_code(win.group)[p_z], "winner group bit value")
    kw = wire.send("Z", cfg.team_code(win.index), "winner within its group")

    gw = _group_with_bit(cfg, know.x_knows, p, v)
    winner = Team(gw, int(kw or "0", 2))
    gl = _other_group(know.x_knows, gw)

    p_bits = wire.send("X", _code(p, cfg.position_len), "group difference position")
    u = wire.send("X", cfg.group_code(gl)[p], "loser group bit value")

    p_y = _decode_position(p_bits)
    hits = [team for team in know.y_knows if cfg.group_code(team.group)[p_y] == u]
    if len(hits) != 1:
        raise AmbiguousDecoding("Y cannot tell which team is asked for")
    kl = wire.send("Y", cfg.team_code(hits[0].index), "team in the other group")

    loser = Team(gl, int(kl or "0", 2))
    return MatchInstance(winner, loser, winner), wire.transcript()


PROTOCOLS = {
    "no_interaction": run_no_interaction,
    "y_first": run_y_first,
    "z_first": run_z_first,
}


def winner_candidates_local_names(cfg: LeagueConfig, match: MatchInstance) -> tuple[set[Team], Transcript]:
    """Winner candidates when team names are only unique inside a group.

    Y has already told X both teams; Z knows only the winner's local name
    and sends it. Whenever both teams share a local name X is left with two
    candidates.
    """
    know, wire = _start(cfg, match)
    k = wire.send("Z", cfg.team_code(know.z_knows.index), "winner local name")
    local = int(k or "0", 2)
    return {team for team in know.y_knows if team.index == local}, wire.transcript()


def closed_form_bits(cfg: LeagueConfig) -> dict[str, dict[str, int]]:
    """Per-party bit counts of each protocol, straight from the count formulas."""
    lg, lt = cfg.group_code_len, cfg.team_code_len
    return {
        "no_interaction": {"X": 0, "Y": lg + 2 * lt, "Z": cfg.global_team_code_len},
        "y_first": {"X": cfg.position_len + cfg.global_position_len, "Y": 1 + 2 * lt, "Z": 1},
        "z_first": {"X": 1 + 2 * cfg.position_len, "Y": lt, "Z": 1 + lt},
    }


@dataclass(frozen=True)
class LeagueComparison:
    config: LeagueConfig
    per_party: dict[str, dict[str, int]]
    transcripts: dict[str, Transcript]

    @property
    def totals(self) -> dict[str, int]:
        return {name: sum(bits.values()) for name, bits in self.per_party.items()}

    @property
    def informant_totals(self) -> dict[str, int]:
        return {name: bits["Y"] + bits["Z"] for name, bits in self.per_party.items()}

    @property
    def order_dependent(self) -> bool:
        return self.totals["y_first"] != self.totals["z_first"]

    def to_json(self) -> dict:
        return {
            "groups": self.config.groups,
            "teams": self.config.teams,
            "per_party_bits": self.per_party,
            "totals": self.totals,
            "informant_totals": self.informant_totals,
            "grouped_message_counts": {k: t.message_count_grouped for k, t in self.transcripts.items()},
            "order_dependent": self.order_dependent,
            "transcripts": {k: t.to_json_lines() for k, t in self.transcripts.items()},
        }


def compare_orders(cfg: LeagueConfig, match: MatchInstance | None = None) -> LeagueComparison:
    """Run all three protocols on one match (bit counts do not depend on it)."""
    match = match or next(all_matches(cfg))
    transcripts = {name: run(cfg, match)[1] for name, run in PROTOCOLS.items()}
    return LeagueComparison(cfg, {k: t.per_party_bits for k, t in transcripts.items()}, transcripts)


def check_all_decodings(cfg: LeagueConfig) -> bool:
    """True when every protocol reconstructs every match exactly."""
    return all(run(cfg, m)[0] == m for m in all_matches(cfg) for run in PROTOCOLS.values())
