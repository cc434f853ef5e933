"""Rate regions of ranked decode-forward schemes and their outer bounds."""
from __future__ import annotations

from itertools import permutations

from .channel import ChannelModel
from .errors import IndexOutOfRange, PathUniverseTooLarge, PointOutsideRegion
from .geometry import INF, TOL, RatePentagon, RegionUnion, compare, intersect_all
from .ranking import (PathPair, ValidPairing, as_pairings, lower_set,
                      orthant_sets, predecessors)

MAX_PATH_UNIVERSE_NODES = 7


def _source_pentagon(model: ChannelModel, paths: PathPair, node: int) -> RatePentagon:
    # a source only decodes the other source's message
    other = paths.other(node)
    pred, rest = predecessors(paths, node, other)
    bits = model.mi_node(pred, node, rest)
    if other == paths.forward[0]:
        return RatePentagon(cap_r1=bits)
    return RatePentagon(cap_rm=bits)


def _three_caps(paths: PathPair, cap) -> RatePentagon:
    s1, sm = paths.sources
    return RatePentagon(cap((s1,)), cap((sm,)), cap((s1, sm)))


def node_region(model: ChannelModel, pairing: ValidPairing, node: int) -> RatePentagon:
    """Per-node pentagon of a ranked scheme."""
    paths = pairing.paths
    if node in paths.sources:
        return _source_pentagon(model, paths, node)

    def cap(sources):
        above, below, below_c, _ = orthant_sets(pairing, node, sources)
        total = sum(model.mi_node([j], node, lower_set(pairing, j)) for j in sorted(above))
        return total + model.mi_node(below, node, below_c)

    return _three_caps(paths, cap)


def scheme_region(model: ChannelModel, pairing: ValidPairing) -> RatePentagon:
    return intersect_all(node_region(model, pairing, i)
                         for i in range(1, pairing.node_count + 1))


def achievable_region(model: ChannelModel, m: int | None = None,
                      rankings=None) -> RegionUnion:
    """Union of the scheme pentagons over every (or the given) valid ranking."""
    m = model.node_count if m is None else m
    if m != model.node_count:
        raise ValueError(f"model has {model.node_count} nodes, asked for {m}")
    if m < 3:
        raise ValueError("the two-way relay region needs at least one relay (M >= 3)")
    return RegionUnion([(v, scheme_region(model, v)) for v in as_pairings(m, rankings)])


def df_node_region(model: ChannelModel, paths: PathPair, node: int) -> RatePentagon:
    """Pentagon of plain decode-forward constraints at one node."""
    if node in paths.sources:
        return _source_pentagon(model, paths, node)

    def cap(sources):
        pred, rest = predecessors(paths, node, sources)
        return model.mi_node(pred, node, rest)

    return _three_caps(paths, cap)


def _all_paths(m: int):
    fwd = [(1,) + p for p in permutations(range(2, m + 1))]
    bwd = [(m,) + p for p in permutations(range(1, m))]
    return fwd, bwd


def cd_region(model: ChannelModel, m: int | None = None,
              path_universe: str = "canonical"):
    """Decode-forward outer region.

    With ``path_universe="canonical"`` a single pentagon; with ``"all"`` the
    union over every pair of node orderings, as a :class:`RegionUnion`.
    """
    m = model.node_count if m is None else m
    if m < 2:
        raise ValueError("need at least two nodes")
    if path_universe == "canonical":
        paths = PathPair.canonical(m)
        return intersect_all(df_node_region(model, paths, i) for i in range(1, m + 1))
    if path_universe != "all":
        raise ValueError(f"unknown path universe {path_universe!r}")
    if m > 6:
        raise PathUniverseTooLarge(f"union over all path pairs is limited to M <= 6, got {m}")
    fwd, bwd = _all_paths(m)
    members = []
    for f in fwd:
        for b in bwd:
            paths = PathPair(f, b)
            members.append((paths, intersect_all(
                df_node_region(model, paths, i) for i in range(1, m + 1))))
    return RegionUnion(members)


def _cut_caps(model: ChannelModel, path: tuple) -> float:
    # every node past the head of the path bounds the rate of its source
    best = INF
    for k in range(1, len(path)):
        before = frozenset(path[:k])
        rest = frozenset(path) - before
        best = min(best, model.mi_cut(before, rest, rest))
    return best


def cutset_region(model: ChannelModel, m: int | None = None,
                  path_universe: str = "canonical") -> RatePentagon:
    """Cut-set outer bound, a rectangle stored as a pentagon without sum cap.

    Only single-source cuts exist with two sources, so the constraints on R1
    depend only on the forward path and those on RM only on the backward
    path; the intersection over path pairs therefore splits into two
    independent scans.
    """
    m = model.node_count if m is None else m
    if m < 2:
        raise ValueError("need at least two nodes")
    if path_universe == "canonical":
        paths = PathPair.canonical(m)
        fwd, bwd = [paths.forward], [paths.backward]
    elif path_universe == "all":
        if m > MAX_PATH_UNIVERSE_NODES:
            raise PathUniverseTooLarge(
                f"path universe 'all' is limited to M <= {MAX_PATH_UNIVERSE_NODES}, got {m}")
        fwd, bwd = _all_paths(m)
    else:
        raise ValueError(f"unknown path universe {path_universe!r}")
    c1 = min(_cut_caps(model, p) for p in fwd)
    cm = min(_cut_caps(model, p) for p in bwd)
    return RatePentagon(c1, cm, INF)


# -- biased multiple-access relay channel --------------------------------
# sources 1 and M, destination 2, relays 3..M-1 forwarding only source M

def _bmarc_check(model: ChannelModel, m: int | None) -> int:
    m = model.node_count if m is None else m
    if m != model.node_count:
        raise ValueError(f"model has {model.node_count} nodes, asked for {m}")
    if m < 3:
        raise ValueError("the biased relay channel needs at least three nodes")
    return m


def bmarc_destination_region(model: ChannelModel, m: int | None = None) -> RatePentagon:
    """Plain decode-forward pentagon at the destination (node 2)."""
    m = _bmarc_check(model, m)
    others = set(range(3, m + 1))
    return RatePentagon(
        model.mi_node([1], 2, others | {2}),
        model.mi_node(others, 2, {1, 2}),
        model.mi_node(others | {1}, 2, {2}))


def bmarc_subregion(model: ChannelModel, m: int | None, index: int) -> RatePentagon:
    """Pentagon decodable at node 2 when relay ``index`` sets the split."""
    m = _bmarc_check(model, m)
    if not 3 <= index <= m:
        raise IndexOutOfRange(f"index must lie in 3..{m}, got {index}")
    i = index
    early = set(range(3, i))
    late = set(range(i, m + 1))
    return RatePentagon(
        model.mi_node([1], 2, set(range(2, i + 1))),
        model.mi_node(early, 2, {2}) + model.mi_node(late, 2, {1, 2} | early),
        model.mi_node({1} | early | late, 2, {2}))


def bmarc_union(model: ChannelModel, m: int | None = None) -> RegionUnion:
    m = _bmarc_check(model, m)
    return RegionUnion([(i, bmarc_subregion(model, m, i)) for i in range(m, 2, -1)])


def bmarc_cover_check(model: ChannelModel, m: int | None = None, tol: float = TOL) -> dict:
    """Compare the union of split pentagons with the destination pentagon."""
    m = _bmarc_check(model, m)
    target = bmarc_destination_region(model, m)
    union = bmarc_union(model, m)
    covered, margin, witness = compare(target, union, tol)
    inside, _, _ = compare(union, target, tol)
    area_gap = abs(target.area() - union.area())
    return {
        "covered": covered,
        "equal": covered and inside and area_gap < tol,
        "area_gap": area_gap,
        "margin": margin,
        "witness": None if covered else witness,
    }


def bmarc_select_index(model: ChannelModel, m: int | None, point, tol: float = TOL) -> int:
    """Largest split index whose pentagon holds ``point``."""
    m = _bmarc_check(model, m)
    if not bmarc_destination_region(model, m).contains(point, tol):
        raise PointOutsideRegion(f"{point} lies outside the destination pentagon")
    for i in range(m, 2, -1):
        if bmarc_subregion(model, m, i).contains(point, tol):
            return i
    raise PointOutsideRegion(f"{point} is not covered by any split pentagon")


def bounds_report(model: ChannelModel, path_universe: str = "canonical",
                  rankings=None, tol: float = TOL) -> dict:
    """Achievable union against the decode-forward and cut-set outer regions."""
    ach = achievable_region(model, rankings=rankings)
    cd = cd_region(model)
    cut = cutset_region(model, path_universe=path_universe)
    in_cd, cd_margin, cd_witness = compare(ach, cd, tol)
    in_cut, cut_margin, cut_witness = compare(ach, cut, tol)
    fr = ach.frontier
    r1_max, rm_max = fr.x_max, float(fr.ys[0])
    return {
        "achievable_area": ach.area(),
        "cd_caps": list(cd.caps),
        "cd_area": cd.area(),
        "cutset_caps": [cut.cap_r1, cut.cap_rm],
        "cutset_area": cut.cap_r1 * cut.cap_rm,
        "achievable_in_cd": in_cd,
        "cd_margin": cd_margin,
        "cd_witness": None if in_cd else cd_witness,
        "achievable_in_cutset": in_cut,
        "cutset_margin": cut_margin,
        "cutset_witness": None if in_cut else cut_witness,
        "gap_r1": cut.cap_r1 - r1_max,
        "gap_rm": cut.cap_rm - rm_max,
        "path_universe": path_universe,
    }

