import math

import numpy as np
import pytest

from twrelay.channel import GaussianNetwork, MITable, random_gaussian, symmetric_gaussian, tabulate
from twrelay.errors import IndexOutOfRange, PathUniverseTooLarge, PointOutsideRegion
from twrelay.geometry import INF, RatePentagon, compare, equals, is_subset
from twrelay.ranking import RankAssignment, ValidPairing
from twrelay.region import (achievable_region, bmarc_cover_check, bmarc_destination_region,
                            bmarc_select_index, bmarc_subregion, bmarc_union, bounds_report,
                            cd_region, cutset_region, node_region, scheme_region)

HALF_LOG3 = 0.5 * math.log2(3)


# -- closed-form Gaussian oracles, written independently of the package ----

def scalar_mi(model, senders, receiver, given):
    """I(X_A; Y_i | X_C) for one receiver, remaining inputs as noise."""
    g, p, n = model.gains, model.powers, model.noises
    known = set(senders) | set(given) | {receiver}
    noise = n[receiver - 1] + sum(g[j - 1, receiver - 1] ** 2 * p[j - 1]
                                  for j in range(1, model.node_count + 1) if j not in known)
    signal = sum(g[j - 1, receiver - 1] ** 2 * p[j - 1] for j in senders)
    return 0.5 * math.log2((noise + signal) / noise)


def cut_mi(model, senders, receivers):
    """I(X_A; Y_B | everything else), via det(I + H^T P H / N)."""
    a = [j - 1 for j in senders]
    b = [i - 1 for i in receivers]
    h = model.gains[np.ix_(a, b)]
    k = np.eye(len(b)) + (h.T * model.powers[a]) @ h / model.noises[b][:, None]
    return 0.5 * math.log2(np.linalg.det(k))


def V(*ranks):
    return ValidPairing.canonical(ranks)


@pytest.fixture
def model3(rng):
    return random_gaussian(3, rng)


# -- node and scheme regions ----------------------------------------------

def test_relay_with_empty_upper_orthant_is_plain_decode_forward(model3):
    p = node_region(model3, V(3, 2, 1), 2)
    assert p.cap_r1 == pytest.approx(scalar_mi(model3, [1], 2, [3]), abs=1e-12)
    assert p.cap_rm == pytest.approx(scalar_mi(model3, [3], 2, [1]), abs=1e-12)
    assert p.cap_sum == pytest.approx(scalar_mi(model3, [1, 3], 2, []), abs=1e-12)


def test_four_node_relay_conditions_on_both_low_nodes(rng):
    model = random_gaussian(4, rng)
    p = node_region(model, V(4, 2, 1, 3), 2)
    # the complement set below rank(ref(2)) = 4 is {1, 2}
    assert p.cap_rm == pytest.approx(scalar_mi(model, [3, 4], 2, [1]), abs=1e-12)
    assert p.cap_rm != pytest.approx(scalar_mi(model, [3, 4], 2, []), abs=1e-6)


def test_relay_with_upper_orthant_chains_terms(rng):
    model = random_gaussian(4, rng)
    v = V(4, 2, 1, 3)
    # relay 3: ref(3) = 4 (rank 3); predecessors of 3 for source 1 are {1, 2}
    # with rank(1) = 4 above the threshold, so A = {1}, L(1) = {2, 3, 4}
    p = node_region(model, v, 3)
    expected = scalar_mi(model, [1], 3, [2, 4]) + scalar_mi(model, [2], 3, [4])
    assert p.cap_r1 == pytest.approx(expected, abs=1e-12)


def test_source_caps_only_bind_incoming_rate(model3):
    p1 = node_region(model3, V(3, 2, 1), 1)
    assert p1.cap_r1 == INF and p1.cap_sum == INF
    assert p1.cap_rm == pytest.approx(scalar_mi(model3, [2, 3], 1, []), abs=1e-12)
    p3 = node_region(model3, V(3, 2, 1), 3)
    assert p3.cap_rm == INF and p3.cap_sum == INF
    assert p3.cap_r1 == pytest.approx(scalar_mi(model3, [1, 2], 3, []), abs=1e-12)


def test_symmetric_three_node_scheme_by_hand():
    model = symmetric_gaussian(3)
    for v in (V(3, 2, 1), V(1, 2, 3), V(3, 1, 2), V(2, 1, 3)):
        assert scheme_region(model, v).caps == pytest.approx((0.5, 0.5, HALF_LOG3), abs=1e-12)


def test_table_with_dominant_relays_leaves_source_caps():
    v = V(3, 2, 1)
    model = symmetric_gaussian(3)
    table = tabulate(model, lambda m: scheme_region(m, v))
    for key in list(table.entries):
        if key[1] == frozenset([2]):
            table = table.with_entry(key[0], key[1], key[2], 50.0)
    p = scheme_region(table, v)
    assert p.cap_r1 == pytest.approx(scalar_mi(model, [1, 2], 3, []))
    assert p.cap_rm == pytest.approx(scalar_mi(model, [2, 3], 1, []))
    assert p.cap_sum == 50.0


# -- achievable union -----------------------------------------------------

def test_union_of_symmetric_three_node_channel():
    u = achievable_region(symmetric_gaussian(3))
    assert len(u.members) == 4
    for _, p in u.members:
        for pt in p.vertices():
            assert u.contains(pt)
    expected = [(0, 0.5), (HALF_LOG3 - 0.5, 0.5), (0.5, HALF_LOG3 - 0.5), (0.5, 0)]
    assert np.allclose(u.frontier.points, expected, atol=1e-12)


def test_ranking_filter_gives_single_member(model3):
    u = achievable_region(model3, rankings=[RankAssignment((3, 2, 1))])
    assert len(u.members) == 1
    assert u.frontier.points == scheme_region(model3, V(3, 2, 1)).frontier().points


def test_needs_a_relay():
    with pytest.raises(ValueError):
        achievable_region(symmetric_gaussian(2))


def test_zero_gain_channel_collapses_to_origin():
    model = GaussianNetwork(np.zeros((4, 4)), np.ones(4), np.ones(4))
    u = achievable_region(model)
    assert u.area() == 0.0 and u.frontier.points == ((0.0, 0.0),)
    rep = bounds_report(model)
    assert rep["cutset_caps"] == [0.0, 0.0] and rep["cd_caps"] == [0.0, 0.0, 0.0]


def test_perturbing_the_table_never_shrinks_the_region(rng):
    model = random_gaussian(4, rng)
    base = tabulate(model, lambda m: achievable_region(m))
    before = achievable_region(base)
    keys = sorted(base.entries, key=lambda k: (sorted(k[0]), sorted(k[1]), sorted(k[2])))
    for _ in range(25):
        a, b, c = keys[int(rng.integers(len(keys)))]
        bumped = base.with_entry(a, b, c - b, base.entries[(a, b, c)] + rng.uniform(0, 0.5))
        ok, margin, _ = compare(before, achievable_region(bumped))
        assert ok, margin


@pytest.mark.parametrize("m", [3, 4, 5])
def test_relabelling_mirrors_the_region(m, rng):
    model = random_gaussian(m, rng)
    flipped = GaussianNetwork(model.gains[::-1, ::-1], model.powers[::-1], model.noises[::-1])
    assert equals(achievable_region(flipped), achievable_region(model).mirrored(), 1e-9)


# -- outer bounds --------------------------------------------------------

def test_decode_forward_bound_three_nodes(model3):
    cd = cd_region(model3)
    assert cd.cap_r1 == pytest.approx(min(scalar_mi(model3, [1], 2, [3]),
                                          scalar_mi(model3, [1, 2], 3, [])), abs=1e-12)
    assert cd.cap_rm == pytest.approx(min(scalar_mi(model3, [3], 2, [1]),
                                          scalar_mi(model3, [2, 3], 1, [])), abs=1e-12)
    assert cd.cap_sum == pytest.approx(scalar_mi(model3, [1, 3], 2, []), abs=1e-12)


def test_cutset_three_nodes_by_hand(model3):
    cut = cutset_region(model3)
    assert cut.cap_sum == INF
    assert cut.cap_r1 == pytest.approx(min(cut_mi(model3, [1], [2, 3]),
                                           cut_mi(model3, [1, 2], [3])), abs=1e-12)
    assert cut.cap_rm == pytest.approx(min(cut_mi(model3, [3], [1, 2]),
                                           cut_mi(model3, [2, 3], [1])), abs=1e-12)


def test_every_path_cutset_inside_canonical(rng):
    for m in (3, 4, 5):
        model = random_gaussian(m, rng)
        assert is_subset(cutset_region(model, path_universe="all"), cutset_region(model))


def test_path_universe_guard():
    with pytest.raises(PathUniverseTooLarge):
        cutset_region(symmetric_gaussian(8), path_universe="all")
    with pytest.raises(ValueError):
        cutset_region(symmetric_gaussian(3), path_universe="some")


def test_decode_forward_union_over_paths(rng):
    model = random_gaussian(4, rng)
    union = cd_region(model, path_universe="all")
    assert len(union.members) == 36
    assert is_subset(cd_region(model), union)


def test_decode_forward_containment_is_reported(rng):
    # reported, not asserted as an invariant
    rep = bounds_report(random_gaussian(4, rng))
    assert isinstance(rep["achievable_in_cd"], bool)
    assert rep["achievable_in_cutset"]
    assert rep["gap_r1"] >= -1e-9 and rep["gap_rm"] >= -1e-9


# -- biased multiple-access relay channel --------------------------------

def test_bmarc_index_extremes(rng):
    model = random_gaussian(5, rng)
    top = bmarc_subregion(model, 5, 5)
    assert top.cap_r1 == pytest.approx(scalar_mi(model, [1], 2, [3, 4, 5]), abs=1e-12)
    low = bmarc_subregion(model, 5, 3)
    assert low.cap_rm == pytest.approx(scalar_mi(model, [3, 4, 5], 2, [1]), abs=1e-12)
    mid = bmarc_subregion(model, 5, 4)
    assert mid.cap_rm == pytest.approx(
        scalar_mi(model, [3], 2, []) + scalar_mi(model, [4, 5], 2, [1, 3]), abs=1e-12)
    assert mid.cap_sum == pytest.approx(scalar_mi(model, [1, 3, 4, 5], 2, []), abs=1e-12)
    with pytest.raises(IndexOutOfRange):
        bmarc_subregion(model, 5, 2)
    with pytest.raises(IndexOutOfRange):
        bmarc_subregion(model, 5, 6)


def test_bmarc_three_nodes_is_degenerate(model3):
    assert bmarc_subregion(model3, 3, 3).caps == pytest.approx(
        bmarc_destination_region(model3).caps, abs=1e-15)
    assert bmarc_cover_check(model3)["equal"]


def test_bmarc_union_equals_destination_pentagon(rng):
    for m in (4, 5, 6):
        model = random_gaussian(m, rng)
        rep = bmarc_cover_check(model)
        assert rep["covered"] and rep["equal"] and rep["area_gap"] < 1e-9
        assert len(bmarc_union(model).members) == m - 2


def test_bmarc_selection(rng):
    model = random_gaussian(5, rng)
    assert bmarc_select_index(model, 5, (0.0, 0.0)) == 5
    r2 = bmarc_destination_region(model)
    corner = (r2.effective[0], 0.0)
    i = bmarc_select_index(model, 5, corner)
    assert bmarc_subregion(model, 5, i).contains(corner)
    for j in range(i + 1, 6):
        assert not bmarc_subregion(model, 5, j).contains(corner)
    with pytest.raises(PointOutsideRegion):
        bmarc_select_index(model, 5, (r2.effective[0] + 0.1, 0.0))


def test_inconsistent_table_breaks_the_cover():
    eps = 0.01
    entries = {
        # destination pentagon
        ((1,), (2,), (3, 4)): 1.0,
        ((3, 4), (2,), (1,)): 1.0,
        ((1, 3, 4), (2,), ()): 1.5,
        # split pentagons, far smaller than the chain rule would allow
        ((1,), (2,), (3,)): eps,
        ((3,), (2,), ()): eps,
        ((4,), (2,), (1, 3)): eps,
    }
    rep = bmarc_cover_check(MITable(4, entries))
    assert not rep["covered"] and not rep["equal"]
    x, y = rep["witness"]
    assert RatePentagon(1.0, 1.0, 1.5).contains((x, y))
    assert not bmarc_union(MITable(4, entries)).contains((x, y))
