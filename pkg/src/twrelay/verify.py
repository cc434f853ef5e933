"""Seeded property sweeps shared by the CLI and the acceptance tests."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import random_gaussian
from .errors import RecursionCycle
from .geometry import TOL, RegionUnion, compare
from .ranking import enumerate_valid
from .region import (achievable_region, bmarc_cover_check, bmarc_destination_region,
                     bmarc_union, cutset_region)
from .schedule import (DEFAULT_THRESHOLD_MODE, DelayTable, build_schedule,
                       verify_causality)

SUITES = ("lemma1", "cutset", "exhaustive-schedule")


@dataclass
class SweepResult:
    suite: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        state = "PASS" if self.ok else "FAIL"
        return f"{self.suite}: {state} ({self.checked} checked, {len(self.failures)} failed)"


def grid_points(x_max: float, y_max: float, n: int = 200) -> tuple:
    """``n x n`` grid covering the box slightly beyond ``[0,x_max] x [0,y_max]``."""
    xs = np.linspace(0.0, 1.05 * x_max, n)
    ys = np.linspace(0.0, 1.05 * y_max, n)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return gx.ravel(), gy.ravel()


def union_membership(union: RegionUnion, x, y, tol: float = 0.0) -> np.ndarray:
    """Direct membership: the point lies in at least one member pentagon."""
    caps = np.array([p.caps for p in union.pentagons])
    x = np.asarray(x)[:, None]
    y = np.asarray(y)[:, None]
    inside = ((x >= -tol) & (y >= -tol) & (x <= caps[:, 0] + tol)
              & (y <= caps[:, 1] + tol) & (x + y <= caps[:, 2] + tol))
    return inside.any(axis=1)


def grid_disagreements(union: RegionUnion, n: int = 200, tol: float = TOL) -> int:
    """Grid points where frontier and direct membership disagree off the boundary."""
    fr = union.frontier
    x, y = grid_points(max(fr.x_max, 1e-12), max(float(fr.ys[0]), 1e-12), n)
    direct = union_membership(union, x, y)
    height = fr.height(x)
    via_frontier = (x <= fr.x_max) & (y <= height)
    differ = direct != via_frontier
    # a disagreement counts only if the point is clear of the boundary band
    tie = (union_membership(union, x, y, tol) != union_membership(union, x, y, -tol))
    return int(np.sum(differ & ~tie))


def lemma1_sweep(seed: int = 7, count: int = 100, sizes=(3, 4, 5, 6),
                 grid: int = 200, tol: float = TOL) -> SweepResult:
    rng = np.random.default_rng(seed)
    out = SweepResult("lemma1")
    for k in range(count):
        m = int(rng.choice(sizes))
        model = random_gaussian(m, rng)
        rep = bmarc_cover_check(model, m, tol)
        target = bmarc_destination_region(model, m)
        union = bmarc_union(model, m)
        # grid oracle: every grid point of the target lies in some split pentagon
        a, b, _ = target.effective
        x, y = grid_points(a, b, grid)
        in_target = union_membership(RegionUnion([(0, target)]), x, y)
        uncovered = in_target & ~union_membership(union, x, y, tol)
        out.checked += 1
        if not rep["equal"] or uncovered.any():
            out.failures.append({"instance": k, "nodes": m, "report": rep,
                                 "uncovered": int(uncovered.sum())})
    return out


def cutset_sweep(seed: int = 7, count: int = 100, sizes=(3, 4, 5, 6),
                 tol: float = TOL) -> SweepResult:
    rng = np.random.default_rng(seed)
    out = SweepResult("cutset")
    for k in range(count):
        m = int(rng.choice(sizes))
        model = random_gaussian(m, rng)
        ach = achievable_region(model)
        cut = cutset_region(model, path_universe="all")
        ok, margin, witness = compare(ach, cut, tol)
        out.checked += 1
        if not ok:
            out.failures.append({"instance": k, "nodes": m, "margin": margin,
                                 "witness": witness})
    return out


def schedule_sweep(max_nodes: int = 7, blocks: int = 50,
                   threshold_mode: str = DEFAULT_THRESHOLD_MODE) -> SweepResult:
    out = SweepResult("exhaustive-schedule")
    for m in range(3, max_nodes + 1):
        for v in enumerate_valid(m):
            out.checked += 1
            try:
                table = DelayTable.for_pairing(v, threshold_mode)
            except RecursionCycle as exc:
                out.failures.append({"ranks": list(v.ranks.ranks), "error": str(exc)})
                continue
            if min(table.f.values()) < 1:
                out.failures.append({"ranks": list(v.ranks.ranks), "error": "f < 1"})
                continue
            sched = build_schedule(v, blocks, table.dtilde, table.d)
            rep = verify_causality(sched, table.d, table.dtilde)
            if not rep.ok:
                out.failures.append({"ranks": list(v.ranks.ranks),
                                     "violations": [x._asdict() for x in rep.violations]})
    return out


def run_suite(name: str, seed: int = 7, count: int = 100, max_nodes: int = 7,
              threshold_mode: str = DEFAULT_THRESHOLD_MODE) -> SweepResult:
    if name == "lemma1":
        return lemma1_sweep(seed, count)
    if name == "cutset":
        return cutset_sweep(seed, count)
    if name == "exhaustive-schedule":
        return schedule_sweep(max_nodes, threshold_mode=threshold_mode)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
