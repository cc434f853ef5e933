"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""
import math
import time
from itertools import permutations

import numpy as np
import pytest

from twrelay.channel import GaussianNetwork, random_gaussian
from twrelay.cli import main
from twrelay.geometry import RatePentagon, compare, equals
from twrelay.ranking import (PathPair, ValidPairing, enumerate_valid, lower_set,
                             orthant_sets, predecessors, ref_node, upstream)
from twrelay.region import (achievable_region, bmarc_cover_check, bmarc_destination_region,
                            bmarc_union, cutset_region)
from twrelay.schedule import (DelayTable, build_schedule, compute_d, compute_f,
                              verify_causality)
from twrelay.verify import schedule_sweep

pytestmark = pytest.mark.acceptance

SEED = 7


def _valley(seq):
    n = len(seq)
    minima = sum(1 for k in range(n)
                 if (k == 0 or seq[k] < seq[k - 1]) and (k == n - 1 or seq[k] < seq[k + 1]))
    return minima == 1


def _in_union(caps, x, y, slack=0.0):
    """Direct membership in a union of pentagons given as rows (a, b, c)."""
    x = x[:, None]
    y = y[:, None]
    return ((x <= caps[:, 0] + slack) & (y <= caps[:, 1] + slack)
            & (x + y <= caps[:, 2] + slack)).any(axis=1)


def _grid(x_max, y_max, n=200):
    gx, gy = np.meshgrid(np.linspace(0, 1.05 * x_max, n), np.linspace(0, 1.05 * y_max, n),
                         indexing="ij")
    return gx.ravel(), gy.ravel()


def test_criterion_1_ranking_enumeration(record, capsys):
    t0 = time.perf_counter()
    main(["rankings", "--nodes", "3"])
    listed = set(capsys.readouterr().out.split())
    ok = listed == {"(3,2,1)", "(1,2,3)", "(3,1,2)", "(2,1,3)"}
    counts = {}
    for m in range(2, 9):
        got = [v.ranks.ranks for v in enumerate_valid(m)]
        brute = sorted(p for p in permutations(range(1, m + 1)) if _valley(p))
        counts[m] = len(got)
        ok &= got == brute and len(got) == 2 ** (m - 1)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5
    record(1, ok, f"M=3 listing {sorted(listed)}, counts {counts}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_combinatorics(record):
    paths = PathPair((1, 3, 2, 4, 5), (5, 2, 3, 4, 1))
    v1 = ValidPairing.canonical((5, 3, 2, 1, 4))
    v2 = ValidPairing.canonical((5, 3, 1, 2, 4))
    checks = {
        "P_2({1})": (predecessors(paths, 2, {1})[0], {1, 3}),
        "P~_2({1,5})": (predecessors(paths, 2, {1, 5})[1], {2, 4}),
        "ref(2)": (ref_node(v1, 2), 1),
        "ref(3)": (ref_node(v1, 3), 2),
        "U(2)": (upstream(PathPair.canonical(5), 2)[0], {1, 3}),
        "A_4({1})": (orthant_sets(v2, 4, {1}).above, {1}),
        "B_4({1,5})": (orthant_sets(v2, 4, {1, 5}).below, {2, 3, 5}),
        "B~_4({1,5})": (orthant_sets(v2, 4, {1, 5}).below_complement, {4}),
        "L(4)": (lower_set(v2, 4), {3}),
    }
    bad = [k for k, (got, want) in checks.items() if got != want]
    record(2, not bad, f"{len(checks) - len(bad)}/{len(checks)} pinned values"
           + (f", mismatched {bad}" if bad else ""))
    assert not bad


def test_criterion_3_delays(record):
    v = ValidPairing.canonical((4, 2, 1, 3))
    f = compute_f(v)
    d = compute_d(f, v)
    got = (f[(1, 1)], f[(2, 1)], f[(4, 4)], d[(2, 1)], d[(3, 1)], d[(3, 4)], d[(2, 4)])
    want = (4, 1, 2, 4, 5, 2, 3)
    ok = got == want
    record(3, ok, f"(f11,f21,f44,d21,d31,d34,d24) = {got}")
    assert ok


def test_criterion_4_bmarc_cover(record):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst_gap, uncovered, not_equal = 0.0, 0, 0
    for _ in range(100):
        m = int(rng.choice([3, 4, 5, 6]))
        model = random_gaussian(m, rng)
        rep = bmarc_cover_check(model, m)
        worst_gap = max(worst_gap, rep["area_gap"])
        not_equal += not rep["equal"]
        a, b, c = bmarc_destination_region(model, m).effective
        x, y = _grid(a, b)
        target = _in_union(np.array([[a, b, c]]), x, y)
        caps = np.array([p.effective for p in bmarc_union(model, m).pentagons])
        uncovered += int(np.sum(target & ~_in_union(caps, x, y, 1e-9)))
    elapsed = time.perf_counter() - t0
    ok = worst_gap < 1e-9 and uncovered == 0 and not_equal == 0 and elapsed < 10
    record(4, ok, f"100 instances, worst area gap {worst_gap:.2e}, "
           f"{uncovered} uncovered grid points, {elapsed:.2f}s")
    assert ok


def test_criterion_5_cutset_sandwich(record):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = math.inf
    for _ in range(100):
        m = int(rng.choice([3, 4, 5, 6]))
        model = random_gaussian(m, rng)
        cut = cutset_region(model, path_universe="all")
        fr = achievable_region(model).frontier
        for x, y in fr.points:
            worst = min(worst, cut.cap_r1 - x, cut.cap_rm - y)
        ok_cmp, _, _ = compare(achievable_region(model), cut)
        worst = worst if ok_cmp else min(worst, -1.0)
    elapsed = time.perf_counter() - t0
    ok = worst >= -1e-9 and elapsed < 60
    record(5, ok, f"100 instances, worst vertex margin {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_criterion_6_schedule_soundness(record):
    t0 = time.perf_counter()
    res = schedule_sweep(max_nodes=7, blocks=50)
    # M = 8 brings the total to 252 pairings; its pipelines outgrow 50 blocks
    extra, extra_fail, longest = 0, 0, 0
    for v in enumerate_valid(8):
        table = DelayTable.for_pairing(v)
        horizon = max(max(table.d.values()), 50)
        longest = max(longest, horizon)
        sched = build_schedule(v, horizon, table.dtilde, table.d)
        extra += 1
        extra_fail += not (min(table.f.values()) >= 1
                           and verify_causality(sched, table.d, table.dtilde).ok)
    elapsed = time.perf_counter() - t0
    total = res.checked + extra
    ok = res.ok and res.checked == 124 and extra_fail == 0 and total == 252 and elapsed < 10
    record(6, ok, f"{res.checked} pairings M<=7 at B=50 with {len(res.failures)} failures; "
           f"{extra} at M=8 (B up to {longest}) with {extra_fail} failures; {elapsed:.2f}s")
    assert ok


def test_criterion_7_geometry_oracle(record):
    rng = np.random.default_rng(SEED)
    bad = 0
    for _ in range(20):
        model = random_gaussian(int(rng.integers(3, 7)), rng)
        union = achievable_region(model)
        fr = union.frontier
        caps = np.array([p.effective for p in union.pentagons])
        x, y = _grid(fr.x_max, float(fr.ys[0]))
        direct = _in_union(caps, x, y)
        below = (x <= fr.x_max) & (y <= fr.height(x))
        tie = _in_union(caps, x, y, 1e-9) & ~_in_union(caps, x, y, -1e-9)
        bad += int(np.sum((direct != below) & ~tie))
    ok = bad == 0
    record(7, ok, f"20 instances x 200x200 grid, {bad} off-boundary disagreements")
    assert ok


# hand expansion of every relay and source bound for M = 3, written down
# before running the code: relay 2 has an empty upper orthant for all four
# rankings, so each ranking reduces to plain decode-forward at the relay
HAND_FIXTURES = {
    "unit": (
        GaussianNetwork(np.ones((3, 3)), np.ones(3), np.ones(3)),
        # I(X1;Y2|X3) = 1/2 log 2, I(X1X3;Y2) = 1/2 log 3, sources 1/2 log 3
        (0.5, 0.5, 0.5 * math.log2(3)),
    ),
    "weak-direct": (
        GaussianNetwork([[0, 1, 0.5], [1, 0, 1], [0.5, 1, 0]], [2, 2, 2], [1, 1, 1]),
        # relay 1/2 log 3, 1/2 log 3, 1/2 log 5; sources 1/2 log 3.5 do not bind
        (0.5 * math.log2(3), 0.5 * math.log2(3), 0.5 * math.log2(5)),
    ),
}


def test_criterion_8_three_node_cross_check(record):
    worst = 0.0
    ok = True
    for name, (model, caps) in HAND_FIXTURES.items():
        union = achievable_region(model)
        ok &= len(union.members) == 4
        hand = RatePentagon(*caps)
        for _, p in union.members:
            worst = max(worst, max(abs(u - w) for u, w in zip(p.effective, hand.effective)))
        ok &= equals(union, hand, 1e-9)
    ok &= worst <= 1e-9
    record(8, ok, f"{len(HAND_FIXTURES)} fixtures x 4 rankings, worst cap error {worst:.1e}")
    assert ok


def test_criterion_9_performance(record):
    model = random_gaussian(10, np.random.default_rng(SEED))
    t0 = time.perf_counter()
    union = achievable_region(model)
    _ = union.frontier
    elapsed = time.perf_counter() - t0
    ok = len(union.members) == 512 and elapsed < 5
    record(9, ok, f"M=10, {len(union.members)} rankings in {elapsed:.2f}s")
    assert ok
