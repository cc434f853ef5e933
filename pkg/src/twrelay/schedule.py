"""Block-Markov encoding/decoding delays and the transmission table they induce.

Delays are keyed by ``(node, source)``. ``f`` is the per-hop delay,
``d`` the encoding delay (blocks between a source emitting a message and a
node re-transmitting it) and ``dtilde`` the decoding delay.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import HorizonTooShort, RecursionCycle
from .ranking import ValidPairing, predecessors, ref_node, upstream_of

THRESHOLD_MODES = ("literal", "strict_self")
# the literal relay threshold can make the recursion cyclic from M=5 on
DEFAULT_THRESHOLD_MODE = "strict_self"


def compute_f(pairing: ValidPairing, threshold_mode: str = DEFAULT_THRESHOLD_MODE) -> dict:
    """Per-hop delays ``f[(i, s)]`` for every node ``i`` that forwards source ``s``.

    A node whose path successor is a relay referencing it must wait for the
    opposite flow: its hop delay sums the opposite-direction hop delays of
    the predecessors at or below a rank threshold. At a source the threshold
    is its own rank; at a relay it is the rank of its reference node
    (``literal``) or its own rank (``strict_self``).
    """
    if threshold_mode not in THRESHOLD_MODES:
        raise ValueError(f"threshold_mode must be one of {THRESHOLD_MODES}")
    paths = pairing.paths
    sources = paths.sources
    rank = pairing.rank
    memo: dict = {}
    pending: set = set()

    def f(i: int, s: int) -> int:
        key = (i, s)
        if key in memo:
            return memo[key]
        if key in pending:
            raise RecursionCycle(f"f{key} depends on itself for ranking {pairing.ranks}")
        pending.add(key)
        succ = paths.successor(i, s)
        if succ is not None and succ not in sources and ref_node(pairing, succ) == i:
            other = paths.other(s)
            if i in sources or threshold_mode == "strict_self":
                thr = rank(i)
            else:
                thr = rank(ref_node(pairing, i))
            pred, _ = predecessors(paths, i, other)
            value = sum(f(k, other) for k in sorted(pred) if rank(k) <= thr)
        else:
            value = 1
        pending.discard(key)
        memo[key] = value
        return value

    for s in sources:
        for i in paths.path(s)[:-1]:
            f(i, s)
    return {k: memo[k] for k in sorted(memo, key=lambda k: (k[1], k[0]))}


def compute_d(f: dict, pairing: ValidPairing) -> dict:
    """Encoding delays: cumulative hop delays along each path.

    Defined at relays and, as an extension, at each source's destination.
    """
    paths = pairing.paths
    d = {}
    for s in paths.sources:
        path = paths.path(s)
        total = 0
        for j, i in zip(path[:-1], path[1:]):
            total += f[(j, s)]
            d[(i, s)] = total
    return d


def default_decoding(d: dict, pairing: ValidPairing) -> dict:
    """Decode each message one block before re-encoding it.

    A destination decodes at the end of the block in which the last relay
    on the path transmits.
    """
    paths = pairing.paths
    out = {}
    for s in paths.sources:
        path = paths.path(s)
        for i in path[1:-1]:
            out[(i, s)] = d[(i, s)] - 1
        last_relay = path[-2]
        out[(path[-1], s)] = d[(last_relay, s)] if last_relay != s else 0
    return out


@dataclass(frozen=True)
class DelayTable:
    f: dict
    d: dict
    dtilde: dict

    @classmethod
    def for_pairing(cls, pairing: ValidPairing, threshold_mode: str = DEFAULT_THRESHOLD_MODE,
                    dtilde: dict | None = None) -> "DelayTable":
        f = compute_f(pairing, threshold_mode)
        d = compute_d(f, pairing)
        return cls(f, d, default_decoding(d, pairing) if dtilde is None else dict(dtilde))

    def to_json(self) -> str:
        def enc(table):
            return {f"{i},{s}": int(v) for (i, s), v in table.items()}
        return json.dumps({"f": enc(self.f), "d": enc(self.d), "dtilde": enc(self.dtilde)},
                          indent=2)

    @classmethod
    def from_json(cls, text: str) -> "DelayTable":
        raw = json.loads(text)
        extra = set(raw) - {"f", "d", "dtilde"}
        if extra:
            raise ValueError(f"unknown delay-table fields {sorted(extra)}")
        return cls(*(parse_delay_map(raw.get(k, {})) for k in ("f", "d", "dtilde")))


def parse_delay_map(raw: dict) -> dict:
    out = {}
    for key, v in raw.items():
        i, s = (int(t) for t in key.split(","))
        out[(i, s)] = int(v)
    return out


@dataclass(frozen=True)
class ScheduleTable:
    """Per-block encode entries and end-of-block decode events.

    ``entries[(b, i)]`` is ``(w1_index, wM_index)``; ``0`` marks a dummy
    index and ``None`` a message the node does not carry.
    ``decodes[(b, i)]`` holds the indices decoded at the end of block ``b``.
    """

    pairing: ValidPairing
    blocks: int
    entries: dict
    decodes: dict = field(default_factory=dict)

    def rows(self):
        m = self.pairing.node_count
        for b in range(1, self.blocks + 1):
            for i in range(1, m + 1):
                yield (b, i) + self.entries[(b, i)] + self.decodes[(b, i)]


CSV_HEADER = ("block", "node", "w1_index", "wM_index", "decoded_w1", "decoded_wM")


def build_schedule(pairing: ValidPairing, blocks: int, dtilde: dict | None = None,
                   d: dict | None = None, threshold_mode: str = DEFAULT_THRESHOLD_MODE) -> ScheduleTable:
    if d is None:
        d = compute_d(compute_f(pairing, threshold_mode), pairing)
    if dtilde is None:
        dtilde = default_decoding(d, pairing)
    horizon = max(list(d.values()) + list(dtilde.values()))
    if blocks < horizon:
        raise HorizonTooShort(f"{blocks} blocks cannot cover a pipeline delay of {horizon}")
    paths = pairing.paths
    s1, sm = paths.sources
    entries, decodes = {}, {}
    for b in range(1, blocks + 1):
        for i in range(1, pairing.node_count + 1):
            if i == s1:
                entries[(b, i)] = (b, None)
            elif i == sm:
                entries[(b, i)] = (None, b)
            else:
                entries[(b, i)] = (max(0, b - d[(i, s1)]), max(0, b - d[(i, sm)]))
            got = []
            for s in (s1, sm):
                m = b - dtilde[(i, s)] if (i, s) in dtilde else 0
                got.append(m if m >= 1 else None)
            decodes[(b, i)] = tuple(got)
    return ScheduleTable(pairing, blocks, entries, decodes)


class Violation(NamedTuple):
    kind: str  # "encode-before-decode", "upstream", "unknown-message"
    node: int
    source: int
    block: int | None
    detail: str


@dataclass(frozen=True)
class CausalityReport:
    ok: bool
    violations: list

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v._asdict() for v in self.violations]}


def verify_causality(schedule: ScheduleTable, d: dict, dtilde: dict) -> CausalityReport:
    """Replay the schedule block by block and collect causality violations."""
    pairing = schedule.pairing
    paths = pairing.paths
    s1, sm = paths.sources
    violations = []

    for s in (s1, sm):
        path = paths.path(s)
        for i in path[1:]:
            if (i, s) not in dtilde:
                continue
            if i != path[-1] and d[(i, s)] <= dtilde[(i, s)]:
                violations.append(Violation(
                    "encode-before-decode", i, s, None,
                    f"d={d[(i, s)]} must exceed dtilde={dtilde[(i, s)]}"))
            u = upstream_of(paths, i, s)
            du = 0 if u == s else d[(u, s)]
            if dtilde[(i, s)] < du:
                violations.append(Violation(
                    "upstream", i, s, None,
                    f"dtilde={dtilde[(i, s)]} precedes upstream node {u} sending at d={du}"))

    sent = {i: set() for i in range(1, pairing.node_count + 1)}
    known = {i: set() for i in sent}
    for b in range(1, schedule.blocks + 1):
        for i in sent:
            for s, idx in zip((s1, sm), schedule.entries[(b, i)]):
                if idx is None or idx == 0:
                    continue
                if i != s and (s, idx) not in known[i]:
                    violations.append(Violation(
                        "unknown-message", i, s, b,
                        f"encodes w_{s}({idx}) before decoding it"))
                sent[i].add((s, idx))
        for i in sent:
            for s, idx in zip((s1, sm), schedule.decodes[(b, i)]):
                if idx is None:
                    continue
                u = upstream_of(paths, i, s)
                if (s, idx) not in sent[u]:
                    violations.append(Violation(
                        "upstream", i, s, b,
                        f"decodes w_{s}({idx}) before node {u} has sent it"))
                known[i].add((s, idx))
    return CausalityReport(not violations, violations)


class Latency(NamedTuple):
    per_source: dict
    worst: int


def pipeline_latency(pairing: ValidPairing, threshold_mode: str = DEFAULT_THRESHOLD_MODE) -> Latency:
    """Blocks from a source emitting a message to its destination decoding it."""
    if pairing.node_count < 3:
        raise ValueError("pipeline latency needs at least one relay (M >= 3)")
    table = DelayTable.for_pairing(pairing, threshold_mode)
    paths = pairing.paths
    per = {s: table.dtilde[(paths.path(s)[-1], s)] for s in paths.sources}
    return Latency(per, max(per.values()))
