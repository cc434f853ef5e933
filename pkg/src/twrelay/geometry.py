"""Exact planar geometry for two-rate regions.

Every region here is a finite union of pentagons
``{0 <= R1 <= a, 0 <= RM <= b, R1 + RM <= c}``. Such unions are closed and
downward closed in the nonnegative quadrant, so each one is fully described
by its upper boundary: a non-increasing piecewise-linear function of ``R1``
with slopes 0 and -1 plus vertical drops.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DegenerateRegion

TOL = 1e-9
INF = math.inf


@dataclass(frozen=True)
class RatePentagon:
    cap_r1: float = INF
    cap_rm: float = INF
    cap_sum: float = INF

    def __post_init__(self):
        for name in ("cap_r1", "cap_rm", "cap_sum"):
            v = float(getattr(self, name))
            if math.isnan(v) or v < 0:
                raise ValueError(f"{name} must be non-negative, got {v}")
            object.__setattr__(self, name, v)

    @property
    def caps(self) -> tuple:
        return (self.cap_r1, self.cap_rm, self.cap_sum)

    @property
    def bounded(self) -> bool:
        return math.isfinite(min(self.cap_r1, self.cap_sum)) and \
            math.isfinite(min(self.cap_rm, self.cap_sum))

    @property
    def effective(self) -> tuple:
        """Caps with the per-rate caps tightened by the sum cap."""
        c = self.cap_sum
        return (min(self.cap_r1, c), min(self.cap_rm, c), c)

    def intersect(self, other: "RatePentagon") -> "RatePentagon":
        return RatePentagon(*(min(x, y) for x, y in zip(self.caps, other.caps)))

    def mirrored(self) -> "RatePentagon":
        return RatePentagon(self.cap_rm, self.cap_r1, self.cap_sum)

    def contains(self, point, tol: float = TOL) -> bool:
        x, y = point
        return (x >= -tol and y >= -tol and x <= self.cap_r1 + tol
                and y <= self.cap_rm + tol and x + y <= self.cap_sum + tol)

    def vertices(self) -> list:
        """Counter-clockwise vertex list starting at the origin."""
        if not self.bounded:
            raise DegenerateRegion(f"pentagon {self.caps} is unbounded")
        a, b, c = self.effective
        pts = [(0.0, 0.0), (a, 0.0), (a, min(b, c - a)), (max(0.0, c - b), b), (0.0, b)]
        return _dedupe(pts)

    def frontier(self) -> "Frontier":
        if not self.bounded:
            raise DegenerateRegion(f"pentagon {self.caps} is unbounded")
        a, b, c = self.effective
        return Frontier.from_points([(0.0, b), (max(0.0, min(a, c - b)), b),
                                     (a, min(b, c - a)), (a, 0.0)])

    def area(self) -> float:
        if not self.bounded:
            raise DegenerateRegion(f"pentagon {self.caps} is unbounded")
        a, b, c = self.effective
        return a * b - 0.5 * max(0.0, a + b - c) ** 2


def intersect_all(pentagons) -> RatePentagon:
    out = RatePentagon()
    for p in pentagons:
        out = out.intersect(p)
    return out


def _dedupe(pts):
    out = []
    for p in pts:
        if not out or p != out[-1]:
            out.append(p)
    return out


def _simplify(pts):
    pts = _dedupe(pts)
    if len(pts) < 3:
        return pts
    out = [pts[0]]
    for q, r in zip(pts[1:-1], pts[2:]):
        p = out[-1]
        cross = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0])
        # scale-free: compare the turn against the edge lengths
        if abs(cross) > 1e-12 * math.hypot(q[0] - p[0], q[1] - p[1]) * math.hypot(r[0] - q[0], r[1] - q[1]):
            out.append(q)
    out.append(pts[-1])
    return out


class Frontier:
    """Upper boundary polyline, vertices in increasing ``r1``.

    Consecutive vertices sharing an abscissa encode a vertical drop, listed
    top first. The last vertex always sits on the ``r1`` axis.
    """

    def __init__(self, points: Sequence):
        pts = [(float(x), float(y)) for x, y in points]
        if not pts:
            raise ValueError("a frontier needs at least one vertex")
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        if xs[0] != 0.0 or np.any(np.diff(xs) < 0) or np.any(np.diff(ys) > 1e-12):
            raise ValueError("frontier must start at r1=0 and be monotone")
        self.points = tuple(pts)
        self.xs, self.ys = xs, ys

    @classmethod
    def from_points(cls, pts) -> "Frontier":
        return cls(_simplify(list(pts)))

    def __repr__(self):
        return f"Frontier({list(self.points)!r})"

    def __len__(self):
        return len(self.points)

    @property
    def x_max(self) -> float:
        return float(self.xs[-1])

    def height(self, x):
        """Largest ``rm`` with ``(x, rm)`` in the region; ``-inf`` outside."""
        x = np.asarray(x, dtype=float)
        xs, ys = self.xs, self.ys
        idx = np.searchsorted(xs, x, side="left")
        out = np.full(x.shape, -np.inf)
        inside = (x >= 0) & (idx < len(xs))
        i = idx[inside]
        xv = x[inside]
        exact = xs[i] == xv
        lo = np.maximum(i - 1, 0)
        span = xs[i] - xs[lo]
        frac = np.where(span > 0, (xv - xs[lo]) / np.where(span > 0, span, 1.0), 1.0)
        interp = ys[lo] + frac * (ys[i] - ys[lo])
        out[inside] = np.where(exact, ys[i], interp)
        return out if out.ndim else float(out)

    def margin(self, x, y, tol: float = TOL):
        """Signed slack of points against the region, tolerant in ``r1``.

        Non-negative inside; a point is tolerantly contained iff its margin
        is at least ``-tol``.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        xm = self.x_max
        probe = np.clip(x - tol, 0.0, xm)
        m = self.height(probe) - y
        m = np.minimum(m, x + tol)
        m = np.minimum(m, y + tol)
        beyond = x > xm + tol
        m = np.where(beyond, np.minimum(xm - x, m), m)
        return m if m.ndim else float(m)

    def contains(self, point, tol: float = TOL) -> bool:
        return bool(self.margin(point[0], point[1], tol) >= -tol)

    def area(self) -> float:
        xs, ys = self.xs, self.ys
        return float(np.sum(np.diff(xs) * (ys[1:] + ys[:-1]) / 2.0))

    def probes(self, other: "Frontier | None" = None, tol: float = TOL) -> np.ndarray:
        """Abscissae that suffice to compare this frontier with another."""
        xs = set(self.xs.tolist())
        if other is not None:
            xs.update(x for x in other.xs.tolist() if x <= self.x_max)
        xs = np.array(sorted(xs))
        mids = (xs[1:] + xs[:-1]) / 2.0
        nudged = np.minimum(xs + tol / 2.0, self.x_max)
        return np.unique(np.concatenate([xs, mids, nudged]))

    def sample_points(self, other: "Frontier | None" = None, tol: float = TOL):
        px = self.probes(other, tol)
        pts = [(x, float(self.height(x))) for x in px]
        # bottoms of vertical drops
        pts.extend(self.points)
        return pts


def _envelope(pentagons) -> Frontier:
    """Exact upper envelope of a union of bounded pentagons."""
    caps = np.array([p.effective for p in pentagons], dtype=float)
    if caps.size == 0:
        raise DegenerateRegion("empty union")
    if not np.all(np.isfinite(caps[:, :2])):
        raise DegenerateRegion("union contains an unbounded pentagon")
    a, b, c = caps[:, 0], caps[:, 1], caps[:, 2]
    flat_end = np.minimum(a, c - b)
    slope_start = np.maximum(0.0, c - b)
    has_slope = slope_start < a
    x_max = float(a.max())
    events = np.unique(np.concatenate([[0.0, x_max], flat_end, slope_start, a]))
    events = events[(events >= 0) & (events <= x_max)]

    pts = [(0.0, float(b.max()))]
    for x0, x1 in zip(events[:-1], events[1:]):
        flat = flat_end >= x1
        slope = has_slope & (slope_start <= x0) & (a >= x1)
        fv = b[flat].max() if flat.any() else -INF
        cv = c[slope].max() if slope.any() else -INF
        if fv == -INF and cv == -INF:
            continue
        pts.append((float(x0), float(max(fv, cv - x0))))
        kink = cv - fv
        if x0 < kink < x1:
            pts.append((float(kink), float(fv)))
        pts.append((float(x1), float(max(fv, cv - x1))))
    pts.append((x_max, 0.0))
    return Frontier.from_points(pts)


class RegionUnion:
    """Finite union of labelled pentagons with its exact Pareto frontier."""

    def __init__(self, members):
        self.members = list(members)
        if not self.members:
            raise DegenerateRegion("a union needs at least one member")

    def __repr__(self):
        return f"RegionUnion({len(self.members)} members)"

    @property
    def pentagons(self) -> list:
        return [p for _, p in self.members]

    @cached_property
    def frontier(self) -> Frontier:
        return _envelope(self.pentagons)

    def contains(self, point, tol: float = TOL) -> bool:
        return any(p.contains(point, tol) for p in self.pentagons)

    def area(self) -> float:
        return self.frontier.area()

    def mirrored(self) -> "RegionUnion":
        return RegionUnion([(lab, p.mirrored()) for lab, p in self.members])


def frontier(region) -> Frontier:
    if isinstance(region, Frontier):
        return region
    if isinstance(region, RatePentagon):
        return region.frontier()
    return region.frontier


def area(region) -> float:
    return frontier(region).area() if not isinstance(region, RatePentagon) else region.area()


def contains(region, point, tol: float = TOL) -> bool:
    return region.contains(point, tol)


def compare(inner, outer, tol: float = TOL):
    """Check ``inner`` is a subset of ``outer``.

    Returns ``(ok, margin, witness)`` where ``margin`` is the worst slack of
    a probe point of ``inner`` against ``outer`` and ``witness`` that point.
    Unbounded outer regions are handled through their caps directly.
    """
    fi = frontier(inner)
    if isinstance(outer, RatePentagon) and not outer.bounded:
        pts = fi.sample_points(None, tol)
        worst, witness = INF, None
        for x, y in pts:
            m = min(outer.cap_r1 - x, outer.cap_rm - y, outer.cap_sum - x - y)
            if m < worst:
                worst, witness = m, (x, y)
        return worst >= -tol, worst, witness
    fo = frontier(outer)
    pts = np.array(fi.sample_points(fo, tol))
    m = fo.margin(pts[:, 0], pts[:, 1], tol)
    k = int(np.argmin(m))
    worst = float(m[k])
    return worst >= -tol, worst, (float(pts[k, 0]), float(pts[k, 1]))


def is_subset(inner, outer, tol: float = TOL) -> bool:
    return compare(inner, outer, tol)[0]


def equals(first, second, tol: float = TOL) -> bool:
    return is_subset(first, second, tol) and is_subset(second, first, tol)


def convexify(region) -> Frontier:
    """Upper concave hull of the frontier (time-sharing closure)."""
    pts = sorted(set(frontier(region).points) | {(0.0, 0.0)})
    pts = [p for p in pts if p != (0.0, 0.0)] or [(0.0, 0.0)]
    hull = []
    for p in sorted(pts, key=lambda q: (q[0], -q[1])):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    # keep the non-increasing part, then drop to the axis
    top = max(range(len(hull)), key=lambda k: (hull[k][1], -hull[k][0]))
    hull = [(0.0, hull[top][1])] + hull[top:]
    if hull[-1][1] != 0.0:
        hull.append((hull[-1][0], 0.0))
    return Frontier.from_points(hull)
