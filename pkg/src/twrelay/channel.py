"""Conditional mutual-information suppliers for an M-node network.

Node labels run from 1 to M. Every model answers two queries,
``I(X_A; Y_i | X_C)`` (:func:`mi_node`) and ``I(X_A; Y_B | X_C)``
(:func:`mi_cut`), in bits. A receiver always knows its own input, so the
inputs of the receiving nodes are conditioned on implicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import (CapacityCapExceeded, ChannelSpecError, MissingEntry,
                     OverlapError, SingularCovariance, UnknownNode)

NodeSet = frozenset

DEFAULT_STATE_CAP = 10**7

_LN2 = math.log(2.0)


def _as_set(nodes: Iterable[int]) -> frozenset:
    return frozenset(int(n) for n in nodes)


class ChannelModel:
    """Common query front-end: argument checks, implicit conditioning, memo."""

    node_count: int

    def _node(self, senders: frozenset, receiver: int, given: frozenset) -> float:
        raise NotImplementedError

    def _cut(self, senders: frozenset, receivers: frozenset, given: frozenset) -> float:
        raise NotImplementedError

    @property
    def nodes(self) -> frozenset:
        return frozenset(range(1, self.node_count + 1))

    def _check(self, *groups: frozenset) -> None:
        everything = self.nodes
        for g in groups:
            bad = g - everything
            if bad:
                raise UnknownNode(f"unknown node(s) {sorted(bad)} for M={self.node_count}")

    def mi_node(self, senders, receiver: int, given=()) -> float:
        a, c = _as_set(senders), _as_set(given)
        self._check(a, c, frozenset([receiver]))
        if a & c:
            raise OverlapError(f"senders and conditioning overlap: {sorted(a & c)}")
        if receiver in a:
            raise OverlapError(f"receiver {receiver} is among the senders")
        if not a:
            return 0.0
        c = c | {receiver}
        key = ("node", a, receiver, c)
        cache = self._memo
        if key not in cache:
            cache[key] = max(0.0, float(self._node(a, receiver, c)))
        return cache[key]

    def mi_cut(self, senders, receivers, given=()) -> float:
        a, b, c = _as_set(senders), _as_set(receivers), _as_set(given)
        self._check(a, b, c)
        if not b:
            raise ValueError("receiver set must be non-empty")
        if a & c:
            raise OverlapError(f"senders and conditioning overlap: {sorted(a & c)}")
        if a & b:
            raise OverlapError(f"receivers {sorted(a & b)} are among the senders")
        if not a:
            return 0.0
        c = c | b
        key = ("cut", a, b, c)
        cache = self._memo
        if key not in cache:
            cache[key] = max(0.0, float(self._cut(a, b, c)))
        return cache[key]


def mi_node(model: ChannelModel, senders, receiver: int, given=()) -> float:
    """``I(X_senders; Y_receiver | X_given)`` in bits."""
    return model.mi_node(senders, receiver, given)


def mi_cut(model: ChannelModel, senders, receivers, given=()) -> float:
    """``I(X_senders; Y_receivers | X_given)`` in bits."""
    return model.mi_cut(senders, receivers, given)


@dataclass(frozen=True, eq=False)
class GaussianNetwork(ChannelModel):
    """Real AWGN network with independent Gaussian inputs.

    ``gains[j][i]`` is the amplitude from transmitter ``j+1`` to receiver
    ``i+1``; the diagonal is ignored. Inputs that are neither sent nor
    conditioned on act as Gaussian interference.
    """

    gains: np.ndarray
    powers: np.ndarray
    noises: np.ndarray
    _memo: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        g = np.array(self.gains, dtype=float)
        p = np.array(self.powers, dtype=float).reshape(-1)
        n = np.array(self.noises, dtype=float).reshape(-1)
        m = p.size
        if m < 2:
            raise ChannelSpecError("a network needs at least two nodes")
        if g.shape != (m, m) or n.size != m:
            raise ChannelSpecError(
                f"shape mismatch: gains {g.shape}, powers {p.size}, noises {n.size}")
        if not np.all(np.isfinite(g)):
            raise ChannelSpecError("gains must be finite")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ChannelSpecError("powers must be finite and non-negative")
        if np.any(n <= 0) or not np.all(np.isfinite(n)):
            raise ChannelSpecError("noise variances must be positive")
        g = g.copy()
        np.fill_diagonal(g, 0.0)
        for name, arr in (("gains", g), ("powers", p), ("noises", n)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        # received power from j at i
        rx = g**2 * p[:, None]
        rx.setflags(write=False)
        object.__setattr__(self, "_rx", rx)

    @property
    def node_count(self) -> int:
        return self.powers.size

    def _node(self, senders, receiver, given):
        col = self._rx[:, receiver - 1]
        signal = sum(col[j - 1] for j in senders)
        interf = sum(col[j - 1] for j in self.nodes - senders - given)
        base = self.noises[receiver - 1] + interf
        return 0.5 * math.log2((base + signal) / base)

    def _cov(self, tx: frozenset, rows: list) -> np.ndarray:
        if not tx:
            return np.zeros((len(rows), len(rows)))
        t = [j - 1 for j in sorted(tx)]
        r = [i - 1 for i in rows]
        gs = self.gains[np.ix_(t, r)]
        return gs.T @ (self.powers[t][:, None] * gs)

    def _cut(self, senders, receivers, given):
        rows = sorted(receivers)
        noise = np.diag(self.noises[[i - 1 for i in rows]])
        unknown = self.nodes - senders - given
        k_u = self._cov(unknown, rows) + noise
        k_all = k_u + self._cov(senders, rows)
        s1, ld1 = np.linalg.slogdet(k_all)
        s0, ld0 = np.linalg.slogdet(k_u)
        if s1 <= 0 or s0 <= 0 or not (np.isfinite(ld1) and np.isfinite(ld0)):
            raise SingularCovariance("covariance determinant is not positive")
        return 0.5 * (ld1 - ld0) / _LN2


def _entropy_bits(p: np.ndarray) -> float:
    q = p[p > 0]
    return float(-(q * np.log2(q)).sum())


@dataclass(frozen=True, eq=False)
class DiscreteChannel(ChannelModel):
    """Discrete memoryless network evaluated by exact summation.

    ``transition`` has shape ``(|X_1|, ..., |X_M|, |Y_1|, ..., |Y_M|)`` and
    holds ``p(y_1..y_M | x_1..x_M)``.
    """

    input_pmfs: tuple
    transition: np.ndarray
    state_cap: int = DEFAULT_STATE_CAP
    _memo: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        pmfs = tuple(np.array(p, dtype=float).reshape(-1) for p in self.input_pmfs)
        m = len(pmfs)
        if m < 2:
            raise ChannelSpecError("a network needs at least two nodes")
        for k, p in enumerate(pmfs, 1):
            if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
                raise ChannelSpecError(f"input pmf of node {k} is not a distribution")
        w = np.array(self.transition, dtype=float)
        if w.ndim != 2 * m or w.shape[:m] != tuple(p.size for p in pmfs):
            raise ChannelSpecError(
                f"transition shape {w.shape} does not match {m} nodes with "
                f"alphabets {[p.size for p in pmfs]}")
        if np.any(w < 0):
            raise ChannelSpecError("transition probabilities must be non-negative")
        rows = w.reshape(int(np.prod(w.shape[:m])), -1).sum(axis=1)
        if np.any(np.abs(rows - 1.0) > 1e-12):
            raise ChannelSpecError("every transition row must sum to 1")
        w.setflags(write=False)
        object.__setattr__(self, "input_pmfs", pmfs)
        object.__setattr__(self, "transition", w)
        object.__setattr__(self, "_joint_cache", [])

    @property
    def node_count(self) -> int:
        return len(self.input_pmfs)

    @property
    def input_alphabets(self) -> tuple:
        return tuple(p.size for p in self.input_pmfs)

    @property
    def output_alphabets(self) -> tuple:
        return self.transition.shape[self.node_count:]

    def _joint(self) -> np.ndarray:
        if not self._joint_cache:
            size = self.transition.size
            if size > self.state_cap:
                raise CapacityCapExceeded(
                    f"{size} joint states exceed the cap of {self.state_cap}")
            m = self.node_count
            px = self.input_pmfs[0]
            for p in self.input_pmfs[1:]:
                px = np.multiply.outer(px, p)
            joint = self.transition * px.reshape(px.shape + (1,) * m)
            self._joint_cache.append(joint)
        return self._joint_cache[0]

    def _h(self, x_nodes: frozenset, y_nodes: frozenset) -> float:
        joint = self._joint()
        m = self.node_count
        keep = {j - 1 for j in x_nodes} | {m + i - 1 for i in y_nodes}
        drop = tuple(ax for ax in range(2 * m) if ax not in keep)
        return _entropy_bits(joint.sum(axis=drop) if drop else joint)

    def _cut(self, senders, receivers, given):
        empty = frozenset()
        return (self._h(senders | given, empty) + self._h(given, receivers)
                - self._h(senders | given, receivers) - self._h(given, empty))

    def _node(self, senders, receiver, given):
        return self._cut(senders, frozenset([receiver]), given)


@dataclass(frozen=True, eq=False)
class MITable(ChannelModel):
    """Directly supplied mutual informations.

    Keys are ``(A, B, C)`` node sets. Receivers are folded into the
    conditioning set on both insertion and lookup, so ``(A, {i}, C)`` and
    ``(A, {i}, C | {i})`` name the same entry.
    """

    nodes_: int
    entries: Mapping
    _memo: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if self.nodes_ < 2:
            raise ChannelSpecError("a network needs at least two nodes")
        table = {}
        for (a, b, c), bits in dict(self.entries).items():
            a, b, c = _as_set(a), _as_set(b), _as_set(c)
            bits = float(bits)
            if not bits >= 0 or math.isinf(bits):
                raise ChannelSpecError(f"entry {sorted(a)},{sorted(b)},{sorted(c)} "
                                       f"must be finite and non-negative, got {bits}")
            table[(a, b, c | b)] = bits
        object.__setattr__(self, "entries", table)

    @property
    def node_count(self) -> int:
        return self.nodes_

    def _lookup(self, a, b, c):
        try:
            return self.entries[(a, b, c)]
        except KeyError:
            raise MissingEntry(
                f"no entry for I(X{sorted(a)}; Y{sorted(b)} | X{sorted(c)})") from None

    def _node(self, senders, receiver, given):
        return self._lookup(senders, frozenset([receiver]), given)

    def _cut(self, senders, receivers, given):
        return self._lookup(senders, receivers, given)

    def with_entry(self, senders, receivers, given, bits: float) -> "MITable":
        entries = dict(self.entries)
        b = _as_set(receivers)
        entries[(_as_set(senders), b, _as_set(given) | b)] = bits
        return MITable(self.nodes_, entries)


class _Recorder(ChannelModel):
    def __init__(self, inner: ChannelModel):
        self.inner = inner
        self.node_count = inner.node_count
        self._memo = {}
        self.seen = {}

    def _node(self, senders, receiver, given):
        bits = self.inner.mi_node(senders, receiver, given)
        self.seen[(senders, frozenset([receiver]), given)] = bits
        return bits

    def _cut(self, senders, receivers, given):
        bits = self.inner.mi_cut(senders, receivers, given)
        self.seen[(senders, receivers, given)] = bits
        return bits


def tabulate(model: ChannelModel, run: Callable[[ChannelModel], object]) -> MITable:
    """Freeze every query ``run(model)`` issues into an :class:`MITable`."""
    rec = _Recorder(model)
    run(rec)
    return MITable(model.node_count, rec.seen)


def random_gaussian(m: int, rng: np.random.Generator, *,
                    gain_range=(0.2, 1.5), power_range=(0.5, 5.0)) -> GaussianNetwork:
    """Random network with unit noise; used by the verification sweeps."""
    gains = rng.uniform(*gain_range, size=(m, m))
    powers = rng.uniform(*power_range, size=m)
    return GaussianNetwork(gains, powers, np.ones(m))


def symmetric_gaussian(m: int, gain: float = 1.0, power: float = 1.0,
                       noise: float = 1.0) -> GaussianNetwork:
    return GaussianNetwork(np.full((m, m), gain), np.full(m, power), np.full(m, noise))
