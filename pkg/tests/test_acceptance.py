"""Exit criteria. Each test records one PASS/FAIL line shown in the summary."""

import itertools
import math
import time

import numpy as np
import pytest
from scipy.sparse.csgraph import minimum_spanning_tree

from conftest import ACCEPTANCE_LINES
from sensorpoll import huffman
from sensorpoll.ambiguity import build_league_supports, league_joint_support, max_ambiguity
from sensorpoll.field import CorrelationModel, build_field, random_field
from sensorpoll.league import PROTOCOLS, LeagueConfig, all_matches, compare_orders
from sensorpoll.scheduling import (
    average_case_complexity,
    brute_force_optimum,
    enumerate_schedules,
    evaluate_schedule,
    greedy_schedule,
)
from sensorpoll.simulator import generate_field_data, run_average_poll, run_poll

N_FIELDS = 100
WORD_LENGTHS = (3, 5, 8, 16)


def record(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}" + (f": {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def formula_bits(N, t):
    c = math.ceil
    lg, lt = math.log2(N), math.log2(t)
    return {
        "no_interaction": {"X": 0, "Y": c(lg) + 2 * c(lt), "Z": c(lg + lt)},
        "y_first": {"X": c(math.log2(lg)) + c(math.log2(lg + lt)), "Y": 1 + 2 * c(lt), "Z": 1},
        "z_first": {"X": 1 + 2 * c(math.log2(lg)), "Y": c(lt), "Z": 1 + c(lt)},
    }


@pytest.fixture(scope="module")
def random_models():
    """Seeded fields: N cycles through 2..8, n through {3, 5, 8, 16},
    positions uniform in [0, 2n]^2."""
    out = []
    for k in range(N_FIELDS):
        rng = np.random.default_rng(1000 + k)
        size = 2 + k % 7
        n = WORD_LENGTHS[k % 4]
        out.append(CorrelationModel.from_field(random_field(rng, size, n, dim=2, extent=2.0 * n)))
    return out


def test_1_league_formula_exactness():
    t0 = time.perf_counter()
    bad = []
    for N, t in itertools.product([2, 4, 8], [1, 2, 4]):
        cfg = LeagueConfig(N, t)
        expected = formula_bits(N, t)
        for match in all_matches(cfg):
            for name, run in PROTOCOLS.items():
                got = run(cfg, match)[1].per_party_bits
                if got != expected[name]:
                    bad.append((N, t, name, match, got))
    totals = compare_orders(LeagueConfig(8, 4)).totals
    elapsed = time.perf_counter() - t0
    ok = (not bad and totals == {"no_interaction": 12, "y_first": 11, "z_first": 10}
          and totals["y_first"] != totals["z_first"] and elapsed < 1.0)
    record(1, "league formula exactness", ok,
           f"totals at N=8,t=4 {totals['no_interaction']}/{totals['y_first']}/{totals['z_first']}, "
           f"{len(bad)} mismatches, {elapsed:.3f}s")
    assert not bad, bad[:3]
    assert totals == {"no_interaction": 12, "y_first": 11, "z_first": 10}
    assert elapsed < 1.0


def test_2_league_decoding_correctness():
    t0 = time.perf_counter()
    cfg = LeagueConfig(4, 2)
    matches = list(all_matches(cfg))
    wrong = [(name, m) for m in matches for name, run in PROTOCOLS.items() if run(cfg, m)[0] != m]
    elapsed = time.perf_counter() - t0
    ok = len(matches) == 48 and not wrong and elapsed < 1.0
    record(2, "league decoding correctness", ok,
           f"{len(matches)} matches x 3 protocols, {len(wrong)} wrong, {elapsed:.3f}s")
    assert len(matches) == 48
    assert not wrong
    assert elapsed < 1.0


def test_3_lower_bound_consistency():
    s = build_league_supports(8, 4)
    bound = {name: max_ambiguity(rel).lower_bound_bits for name, rel in s._asdict().items()}
    joint = max_ambiguity(league_joint_support(8, 4)).lower_bound_bits
    bits = compare_orders(LeagueConfig(8, 4)).per_party
    checks = {
        "Y|X (Y first)": (bits["y_first"]["Y"], bound["y_given_x"]),
        "Z|X,Y (Y first)": (bits["y_first"]["Z"], bound["z_given_xy"]),
        "Z|X (Z first)": (bits["z_first"]["Z"], bound["z_given_x"]),
        "Y|X,Z (Z first)": (bits["z_first"]["Y"], bound["y_given_xz"]),
        "Y,Z|X (Y first)": (bits["y_first"]["Y"] + bits["y_first"]["Z"], joint),
        "Y,Z|X (Z first)": (bits["z_first"]["Y"] + bits["z_first"]["Z"], joint),
    }
    ok = all(measured >= lb for measured, lb in checks.values())
    mu_zxy = max_ambiguity(s.z_given_xy).max_ambiguity
    ok &= mu_zxy == 2 and bits["y_first"]["Z"] == 1
    record(3, "lower-bound consistency", ok,
           ", ".join(f"{k} {m}>={lb}" for k, (m, lb) in checks.items()))
    assert ok, checks


def test_4_greedy_matches_brute_force(random_models):
    t0 = time.perf_counter()
    mismatches = []
    for k, m in enumerate(random_models):
        g = greedy_schedule(m)
        b = brute_force_optimum(m)
        assert b.evaluated_count == math.factorial(m.size)
        if g.best_cost != b.best_cost:
            mismatches.append((k, m.n, m.bits.tolist(), g.best_schedule.order, g.best_cost,
                               b.best_schedule.order, b.best_cost))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 120
    record(4, "greedy vs brute-force oracle", ok,
           f"{len(random_models)} fields, {len(mismatches)} mismatches, {elapsed:.1f}s")
    for mm in mismatches:
        print("counterexample:", mm)
    assert not mismatches, mismatches[0]
    assert elapsed < 120


def test_5_simulator_equals_analytic(random_models):
    t0 = time.perf_counter()
    runs, failures = 0, []
    for k, m in enumerate(random_models):
        data = generate_field_data(m, seed=k)
        assert data.consistency_ok
        for order, cost, _ in enumerate_schedules(m):
            rep = run_poll(m, order, data)
            runs += 1
            if not (rep.total == m.n + cost and rep.analytic_match and rep.reconstruction_exact):
                failures.append((k, order, rep.summary()))
    elapsed = time.perf_counter() - t0
    record(5, "simulator equals analytic cost", not failures,
           f"{runs} (field, schedule) runs, {len(failures)} failures, {elapsed:.1f}s")
    assert not failures, failures[:3]


def test_6_average_case_properties():
    uniform_exact = all(huffman.expected_length([2.0**-b] * 2**b) == b for b in range(1, 13))
    skew = huffman.expected_length([0.5, 0.25, 0.125, 0.125])

    line = CorrelationModel.from_field(build_field([(1, (0,)), (2, (2.5,)), (3, (6,))], n=5))
    uni = run_average_poll(line, (1, 2, 3), None, trials=10_000, seed=11)
    uni_analytic = line.n + average_case_complexity(line, (1, 2, 3))

    skewed_model = CorrelationModel.from_field(build_field([(1, (0,)), (2, (1.5,)), (3, (2.5,))], n=5))
    dist = [[0.5, 0.25, 0.125, 0.125], None]
    sk = run_average_poll(skewed_model, (1, 2, 3), dist, trials=10_000, seed=12)
    sk_analytic = skewed_model.n + average_case_complexity(skewed_model, (1, 2, 3), dist)

    ok = (uniform_exact and skew == 1.75 and skew < 2
          and uni_analytic == line.n + evaluate_schedule(line, (1, 2, 3)).complexity == 16
          and uni.within(3.0) and sk.within(3.0) and sk.analytic == sk_analytic
          and uni.all_exact and sk.all_exact)
    record(6, "average-case properties", ok,
           f"uniform B<=12 exact={uniform_exact}, skewed={skew}, "
           f"MC uniform {uni.mean:.4f} vs {uni_analytic} (se {uni.std_error:.4f}), "
           f"MC skewed {sk.mean:.4f} vs {sk_analytic} (se {sk.std_error:.4f})")
    assert uniform_exact
    assert skew == 1.75
    assert uni_analytic == 16
    assert uni.within(3.0) and sk.within(3.0)


def scipy_mst_weight(model):
    w = model.bits.astype(float)
    np.fill_diagonal(w, 0)
    return int(round(minimum_spanning_tree(w).sum()))


def test_7_mst_lower_bound(random_models):
    below, greedy_off = [], []
    for k, m in enumerate(random_models):
        mst = scipy_mst_weight(m)
        smallest = min(up for _, _, up in enumerate_schedules(m))
        if smallest < mst:
            below.append((k, smallest, mst))
        if greedy_schedule(m).evaluation.uplink_sum != mst:
            greedy_off.append(k)
    ok = not below and not greedy_off
    record(7, "MST lower bound", ok,
           f"{len(below)} schedules below MST, greedy off MST in {len(greedy_off)} fields")
    assert not below
    assert not greedy_off
