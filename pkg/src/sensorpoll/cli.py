"""Command line entry point.

Exit codes: 0 ok, 1 an internal cross-check failed, 2 usage or input error.
The default seed can be overridden with ``SENSORPOLL_SEED``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import league
from .ambiguity import build_league_supports, league_joint_support, max_ambiguity
from .field import CorrelationModel, FieldError, Schedule, correlation_curve, load_field
from .scheduling import (
    DEFAULT_BRUTE_FORCE_LIMIT,
    average_case_complexity,
    brute_force_optimum,
    enumerate_schedules,
    evaluate_schedule,
    greedy_schedule,
)
from .simulator import generate_field_data, run_average_poll, run_poll

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2
SEED_ENV = "SENSORPOLL_SEED"
DEFAULT_SEED = 20061


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _jsonl(rows: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)


def _parse_schedule(text: str) -> Schedule:
    try:
        return Schedule(tuple(int(tok) for tok in text.split(",")))
    except ValueError as exc:
        raise UsageError(f"--schedule {text!r}: {exc}") from None


def cmd_league(args) -> tuple[dict, bool]:
    try:
        cfg = league.LeagueConfig(args.groups, args.teams)
    except league.LeagueError as exc:
        raise UsageError(str(exc)) from None
    cmp = league.compare_orders(cfg)
    if args.jsonl:
        lines = [{"protocol": name, **row}
                 for name, t in cmp.transcripts.items() for row in t.to_json_lines()]
        return _jsonl(lines), cmp.per_party == league.closed_form_bits(cfg)
    report = cmp.to_json()
    report["closed_form_bits"] = league.closed_form_bits(cfg)
    ok = report["per_party_bits"] == report["closed_form_bits"]
    if args.exhaustive:
        exact = league.check_all_decodings(cfg)
        report["all_decodings_exact"] = exact
        ok &= exact
    return report, ok


def cmd_ambiguity(args) -> tuple[dict, bool]:
    try:
        supports = build_league_supports(args.groups, args.teams)
    except league.LeagueError as exc:
        raise UsageError(str(exc)) from None
    report = {name: max_ambiguity(rel).to_json(include_per_y=args.per_y)
              for name, rel in supports._asdict().items()}
    report["yz_given_x"] = max_ambiguity(league_joint_support(args.groups, args.teams)).to_json(
        include_per_y=args.per_y)
    return report, True


def _evaluation_json(ev) -> dict:
    return {
        "schedule": list(ev.schedule.order),
        "complexity": ev.complexity,
        "total_with_first_node": ev.cost.total_with_first_node,
        "per_step_b": list(ev.per_step_b),
        "per_step_query_bits": list(ev.per_step_query),
        "wasteful_steps": ev.wasteful_steps(),
        "steps": ev.table(),
    }


def cmd_schedule(args) -> tuple[dict | str, bool]:
    fld = load_field(args.field)
    if args.emit_correlation_curve:
        curve = correlation_curve(fld.n)
        if args.csv:
            return _csv([{"d": d, "b": b} for d, b in curve]), True
        return {"n": fld.n, "curve": [{"d": d, "b": b} for d, b in curve]}, True

    model = CorrelationModel.from_field(fld)
    if args.csv:
        if model.size > args.limit:
            raise UsageError(f"--csv lists all {model.size}! schedules; N exceeds --limit {args.limit}")
        rows = [{"schedule": "-".join(map(str, o)), "complexity": c, "uplink": u}
                for o, c, u in enumerate_schedules(model)]
        return _csv(rows), True

    report: dict = {"n": fld.n, "nodes": model.size, "method": args.method}
    ok = True
    if args.method in ("greedy", "both"):
        g = greedy_schedule(model, args.start)
        report["greedy"] = {"cost": g.best_cost, **_evaluation_json(g.evaluation)}
    if args.method in ("brute", "both"):
        try:
            b = brute_force_optimum(model, args.limit)
        except FieldError as exc:
            raise UsageError(str(exc)) from None
        report["brute_force"] = {"cost": b.best_cost, "evaluated": b.evaluated_count,
                                 **_evaluation_json(b.evaluation)}
    if args.method == "both":
        agree = report["greedy"]["cost"] == report["brute_force"]["cost"]
        report["agreement"] = agree
        ok = agree
    best = min((report[k] for k in ("greedy", "brute_force") if k in report), key=lambda r: r["cost"])
    report["best_schedule"] = best["schedule"]
    report["best_cost"] = best["cost"]
    return report, ok


def _load_pattern_dist(path):
    if path is None:
        return None
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read pattern distribution {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def cmd_simulate(args) -> tuple[dict | str, bool]:
    fld = load_field(args.field)
    model = CorrelationModel.from_field(fld)
    if args.schedule:
        schedule = _parse_schedule(args.schedule)
        if len(schedule) != model.size:
            raise UsageError(f"--schedule names {len(schedule)} nodes, field has {model.size}")
    else:
        schedule = greedy_schedule(model, args.start).best_schedule
    seed = args.seed if args.seed is not None else _default_seed()

    if args.mode == "worst":
        data = generate_field_data(model, seed)
        rep = run_poll(model, schedule, data)
        ok = rep.analytic_match and rep.reconstruction_exact
        if args.csv:
            return _csv([m.to_json() for m in rep.transcript]), ok
        if args.jsonl:
            return _jsonl([m.to_json() for m in rep.transcript]), ok
        doc = {"schedule": list(schedule.order), "seed": seed, **rep.summary(),
               "transcript": [m.to_json() for m in rep.transcript]}
        return doc, ok

    dist = _load_pattern_dist(args.pattern_dist)
    try:
        rep = run_average_poll(model, schedule, dist, args.trials, seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    doc = {"schedule": list(schedule.order), "seed": seed,
           "worst_case_total": evaluate_schedule(model, schedule).cost.total_with_first_node,
           "average_case_complexity": average_case_complexity(model, schedule, dist),
           **rep.summary()}
    return doc, rep.within(3.0) and rep.all_exact


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sensorpoll", description=__doc__.splitlines()[0])
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    lg = sub.add_parser("league", help="compare the three league protocols")
    lg.add_argument("--groups", type=int, required=True)
    lg.add_argument("--teams", type=int, required=True)
    lg.add_argument("--exhaustive", action="store_true", help="check decoding of every match")
    lg.add_argument("--jsonl", action="store_true", help="emit the transcripts as JSON lines")
    lg.set_defaults(func=cmd_league)

    am = sub.add_parser("ambiguity", help="maximum ambiguities of the league support sets")
    am.add_argument("--groups", type=int, required=True)
    am.add_argument("--teams", type=int, required=True)
    am.add_argument("--per-y", action="store_true", help="list the ambiguity of every y value")
    am.set_defaults(func=cmd_ambiguity)

    sc = sub.add_parser("schedule", help="optimize the polling order of a field")
    sc.add_argument("field")
    sc.add_argument("--method", choices=("greedy", "brute", "both"), default="both")
    sc.add_argument("--start", type=int, default=1)
    sc.add_argument("--limit", type=int, default=DEFAULT_BRUTE_FORCE_LIMIT)
    sc.add_argument("--csv", action="store_true", help="CSV of (schedule, complexity) for all schedules")
    sc.add_argument("--emit-correlation-curve", action="store_true")
    sc.set_defaults(func=cmd_schedule)

    sm = sub.add_parser("simulate", help="message-level polling simulation")
    sm.add_argument("field")
    sm.add_argument("--schedule", help="comma separated node ids; default is the greedy order")
    sm.add_argument("--start", type=int, default=1, help="greedy start node")
    sm.add_argument("--mode", choices=("worst", "average"), default="worst")
    sm.add_argument("--seed", type=int)
    sm.add_argument("--trials", type=int, default=10_000)
    sm.add_argument("--pattern-dist", help="JSON list, one entry per step (null = uniform)")
    sm.add_argument("--csv", action="store_true", help="transcript as CSV (worst mode)")
    sm.add_argument("--jsonl", action="store_true", help="transcript as JSON lines (worst mode)")
    sm.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, ok = args.func(args)
    except (UsageError, FieldError) as exc:
        print(f"sensorpoll {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = report if isinstance(report, str) else _dump(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
