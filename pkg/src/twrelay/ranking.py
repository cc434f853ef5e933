"""Paths, rank assignments and the orthant sets built from them.

Sources are the first nodes of the two paths (1 and M for the canonical
pair). Node sets are returned as frozensets of 1-based labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import (InvalidPairing, NonCanonicalPath, NoPredecessor,
                     RefUndefinedAtSource, UnknownNode)


@dataclass(frozen=True)
class PathPair:
    forward: tuple
    backward: tuple

    def __post_init__(self):
        fwd, bwd = tuple(map(int, self.forward)), tuple(map(int, self.backward))
        m = len(fwd)
        everyone = set(range(1, m + 1))
        if m < 2 or set(fwd) != everyone or len(fwd) != m:
            raise ValueError(f"forward path {fwd} is not a permutation of 1..{m}")
        if set(bwd) != everyone or len(bwd) != m:
            raise ValueError(f"backward path {bwd} is not a permutation of 1..{m}")
        if fwd[0] == bwd[0]:
            raise ValueError("the two paths must start at different sources")
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "backward", bwd)

    @classmethod
    def canonical(cls, m: int) -> "PathPair":
        return cls(tuple(range(1, m + 1)), tuple(range(m, 0, -1)))

    @property
    def node_count(self) -> int:
        return len(self.forward)

    @property
    def sources(self) -> tuple:
        return (self.forward[0], self.backward[0])

    @property
    def is_canonical(self) -> bool:
        return self == PathPair.canonical(self.node_count)

    def path(self, source: int) -> tuple:
        if source == self.forward[0]:
            return self.forward
        if source == self.backward[0]:
            return self.backward
        raise UnknownNode(f"{source} is not a source of this path pair")

    def other(self, source: int) -> int:
        a, b = self.sources
        if source not in (a, b):
            raise UnknownNode(f"{source} is not a source of this path pair")
        return b if source == a else a

    def successor(self, node: int, source: int):
        """Next node after ``node`` on the path of ``source``, or None at the end."""
        path = self.path(source)
        k = _position(path, node)
        return path[k + 1] if k + 1 < len(path) else None


def _position(path: tuple, node: int) -> int:
    try:
        return path.index(node)
    except ValueError:
        raise UnknownNode(f"node {node} is not on path {path}") from None


@dataclass(frozen=True, order=True)
class RankAssignment:
    """``ranks[i-1]`` is the rank of node ``i``."""

    ranks: tuple

    def __post_init__(self):
        r = tuple(map(int, self.ranks))
        if sorted(r) != list(range(1, len(r) + 1)):
            raise ValueError(f"{r} is not a permutation of 1..{len(r)}")
        object.__setattr__(self, "ranks", r)

    def __len__(self):
        return len(self.ranks)

    def rank(self, node: int) -> int:
        if not 1 <= node <= len(self.ranks):
            raise UnknownNode(f"node {node} outside 1..{len(self.ranks)}")
        return self.ranks[node - 1]

    def node_of_rank(self, k: int) -> int:
        return self.ranks.index(k) + 1

    def __str__(self):
        return "(" + ",".join(map(str, self.ranks)) + ")"

    @classmethod
    def parse(cls, text: str) -> "RankAssignment":
        """Parse ``"(4,2,1,3)"`` or ``"4,2,1,3"``."""
        body = text.strip().strip("()[] ")
        return cls(tuple(int(t) for t in body.split(",") if t.strip()))


@dataclass(frozen=True)
class ValidPairing:
    paths: PathPair
    ranks: RankAssignment

    def __post_init__(self):
        if len(self.ranks) != self.paths.node_count:
            raise ValueError("rank assignment and paths disagree on M")
        if not is_valid(self.paths, self.ranks):
            raise InvalidPairing(f"ranking {self.ranks} has more than one local minimum")

    @classmethod
    def canonical(cls, ranks) -> "ValidPairing":
        if not isinstance(ranks, RankAssignment):
            ranks = RankAssignment(tuple(ranks))
        return cls(PathPair.canonical(len(ranks)), ranks)

    @property
    def node_count(self) -> int:
        return self.paths.node_count

    def rank(self, node: int) -> int:
        return self.ranks.rank(node)


class OrthantSets(NamedTuple):
    above: frozenset
    below: frozenset
    below_complement: frozenset
    reference: int


def _sources_of(paths: PathPair, sources) -> tuple:
    if isinstance(sources, int):
        sources = (sources,)
    s = tuple(sorted(set(int(x) for x in sources)))
    if not s or any(x not in paths.sources for x in s):
        raise UnknownNode(f"source set {s} is not a non-empty subset of {paths.sources}")
    return s


def predecessors(paths: PathPair, node: int, sources) -> tuple:
    """Return ``(P_i(S), complement)`` for node ``i`` and source set ``S``.

    The complement holds every node outside ``P_i(S)``, node ``i`` included.
    """
    if not 1 <= node <= paths.node_count:
        raise UnknownNode(f"node {node} outside 1..{paths.node_count}")
    before = set()
    for s in _sources_of(paths, sources):
        path = paths.path(s)
        before.update(path[:_position(path, node)])
    everyone = frozenset(range(1, paths.node_count + 1))
    return frozenset(before), everyone - before


def _is_valley(seq) -> bool:
    k = seq.index(min(seq))
    return (all(seq[j] > seq[j + 1] for j in range(k))
            and all(seq[j] > seq[j - 1] for j in range(k + 1, len(seq))))


def is_valid(paths: PathPair, ranks: RankAssignment) -> bool:
    """True iff the ranks have a single local minimum along both paths."""
    if not paths.is_canonical:
        raise NonCanonicalPath("validity is defined only for the canonical paths")
    if len(ranks) != paths.node_count:
        raise ValueError("rank assignment and paths disagree on M")
    return all(_is_valley([ranks.rank(n) for n in paths.path(s)]) for s in paths.sources)


def enumerate_valid(m: int) -> list:
    """All valid pairings on the canonical paths, lexicographic in the ranks."""
    if m < 2:
        raise ValueError("need at least two nodes")
    # grow the valley outward: rank k sits at the left or right end of ranks < k
    seqs = [(1,)]
    for k in range(2, m + 1):
        seqs = [s for q in seqs for s in ((k,) + q, q + (k,))]
    paths = PathPair.canonical(m)
    return [ValidPairing(paths, RankAssignment(r)) for r in sorted(seqs)]


def upstream_of(paths: PathPair, node: int, source: int) -> int:
    """``u(i, s)``: the node right before ``i`` on the path of ``s``."""
    path = paths.path(source)
    k = _position(path, node)
    if k == 0:
        raise NoPredecessor(f"node {node} heads the path of source {source}")
    return path[k - 1]


def upstream(paths: PathPair, node: int) -> tuple:
    """Return ``(U(i), {s: u(i,s)})`` over the sources where u is defined."""
    per_source = {}
    for s in paths.sources:
        try:
            per_source[s] = upstream_of(paths, node, s)
        except NoPredecessor:
            pass
    if not per_source:
        raise NoPredecessor(f"node {node} has no upstream neighbour")
    return frozenset(per_source.values()), per_source


def ref_node(pairing: ValidPairing, node: int) -> int:
    """Highest-ranked one-hop upstream neighbour of a relay."""
    if node in pairing.paths.sources:
        raise RefUndefinedAtSource(f"ref is defined only at relays, not at source {node}")
    ups, _ = upstream(pairing.paths, node)
    return max(ups, key=pairing.rank)


def orthant_sets(pairing: ValidPairing, node: int, sources) -> OrthantSets:
    ref = ref_node(pairing, node)
    thr = pairing.rank(ref)
    pred, rest = predecessors(pairing.paths, node, sources)
    above = frozenset(j for j in pred if pairing.rank(j) > thr)
    return OrthantSets(above, pred - above,
                       frozenset(j for j in rest if pairing.rank(j) <= thr), ref)


def lower_set(pairing: ValidPairing, node: int) -> frozenset:
    r = pairing.rank(node)
    return frozenset(j for j in range(1, pairing.node_count + 1) if pairing.rank(j) < r)


class Extension(NamedTuple):
    node: int
    side: str  # "base", "left" or "right"


def extension_order(pairing: ValidPairing) -> list:
    """Nodes in ascending rank, tagged with how each one joins the label block.

    The three lowest-ranked nodes form the base block; every later node
    extends the block by one label on the left or on the right.
    """
    m = pairing.node_count
    if m < 3:
        raise ValueError("extension order needs at least three nodes")
    order = [pairing.ranks.node_of_rank(k) for k in range(1, m + 1)]
    base = sorted(order[:3])
    if base[2] - base[0] != 2:
        raise InvalidPairing(f"lowest three ranks of {pairing.ranks} are not contiguous")
    out = [Extension(n, "base") for n in order[:3]]
    lo, hi = base[0], base[2]
    for n in order[3:]:
        if n == lo - 1:
            lo, side = n, "left"
        elif n == hi + 1:
            hi, side = n, "right"
        else:
            raise InvalidPairing(f"node {n} is not adjacent to block {lo}..{hi}")
        out.append(Extension(n, side))
    return out


def as_pairings(m: int, rankings: Iterable | None = None) -> list:
    """Valid pairings for M nodes, optionally restricted to given rank tuples."""
    if rankings is None:
        return enumerate_valid(m)
    out = []
    for r in rankings:
        ra = r if isinstance(r, RankAssignment) else RankAssignment(tuple(r))
        if len(ra) != m:
            raise ValueError(f"ranking {ra} does not have {m} entries")
        out.append(ValidPairing(PathPair.canonical(m), ra))
    return sorted(out, key=lambda p: p.ranks.ranks)
