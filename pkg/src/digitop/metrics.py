"""Metrics on digital images: the l_p family and the shortest-path metric.

Distances are exact wherever the metric allows it: l_1, l_inf and
shortest-path values on Z^n are integers (stored as exact rationals),
while Euclidean (l_2) values carry the exact squared distance alongside
a float.  All strict comparisons involving l_2 floats use an absolute
margin ``TAU``; comparisons between exact values are exact.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .lattice import DigitalImage, Point, is_connected

#: Absolute tolerance for float (l_2) comparisons.  Every l_2 value on a
#: desk-scale image is sqrt(small integer), far from the margin.
TAU = 1e-9

INF = math.inf

Scalar = Fraction | float | int


def _inexact(a: Scalar, b: Scalar) -> bool:
    return isinstance(a, float) or isinstance(b, float)


def lt(a: Scalar, b: Scalar, tau: float = TAU) -> bool:
    """Strict a < b; when floats are involved, less by more than tau."""
    if _inexact(a, b):
        return float(a) < float(b) - tau
    return a < b


def le(a: Scalar, b: Scalar, tau: float = TAU) -> bool:
    """a <= b, within tau when floats are involved."""
    if _inexact(a, b):
        return float(a) <= float(b) + tau
    return a <= b


def ge(a: Scalar, b: Scalar, tau: float = TAU) -> bool:
    return le(b, a, tau)


def gt(a: Scalar, b: Scalar, tau: float = TAU) -> bool:
    return lt(b, a, tau)


@dataclass(frozen=True)
class MetricSpec:
    """Choice of metric: l_p with p in {1, 2, inf}, or shortest-path."""

    kind: str
    p: int | float | None = None

    def __post_init__(self) -> None:
        if self.kind == "lp":
            if self.p not in (1, 2, INF):
                raise ValueError(f"p must be 1, 2 or inf, got {self.p!r}")
        elif self.kind == "shortest_path":
            if self.p is not None:
                raise ValueError("shortest_path takes no p")
        else:
            raise ValueError(f"unknown metric kind: {self.kind!r}")

    @classmethod
    def l1(cls) -> "MetricSpec":
        return cls("lp", 1)

    @classmethod
    def l2(cls) -> "MetricSpec":
        return cls("lp", 2)

    @classmethod
    def linf(cls) -> "MetricSpec":
        return cls("lp", INF)

    @classmethod
    def shortest_path(cls) -> "MetricSpec":
        return cls("shortest_path")

    @property
    def exact(self) -> bool:
        """Whether distances under this metric are exact rationals."""
        return not (self.kind == "lp" and self.p == 2)

    def label(self) -> str:
        if self.kind == "shortest_path":
            return "shortest_path"
        return "linf" if self.p == INF else f"l{self.p}"


@dataclass(frozen=True)
class Distance:
    """A metric value: exact rational, or sqrt of an exact integer for l_2.

    ``sq`` is populated exactly when the value came from the l_2 metric,
    in which case ``value`` is the float sqrt of it.
    """

    value: Fraction | float
    sq: int | None = None

    def __post_init__(self) -> None:
        if self.sq is None:
            if float(self.value) < 0:
                raise ValueError("distances are nonnegative")
        elif self.sq < 0:
            raise ValueError("squared distances are nonnegative")

    @property
    def is_exact(self) -> bool:
        return self.sq is None

    def is_zero(self) -> bool:
        # Exact even for l_2: sqrt(n) == 0 iff n == 0.
        return self.sq == 0 if self.sq is not None else self.value == 0

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class MetricSpace:
    """A digital image bound to a metric.

    Binding a shortest-path metric validates connectivity up front;
    distance tables are precomputed once and shared read-only.
    """

    image: DigitalImage
    metric: MetricSpec

    def __post_init__(self) -> None:
        if self.metric.kind == "shortest_path" and not is_connected(self.image):
            raise ValueError("shortest_path metric requires a connected image")

    @cached_property
    def _hops(self) -> tuple[tuple[int, ...], ...]:
        """All-pairs hop counts by breadth-first search from each point."""
        n = len(self.image)
        nbrs = self.image.neighbor_indices
        table = []
        for src in range(n):
            dist = [-1] * n
            dist[src] = 0
            frontier = deque([src])
            while frontier:
                i = frontier.popleft()
                for j in nbrs[i]:
                    if dist[j] < 0:
                        dist[j] = dist[i] + 1
                        frontier.append(j)
            table.append(tuple(dist))
        return tuple(table)

    def _dist(self, x: Point, y: Point) -> Distance:
        kind, p = self.metric.kind, self.metric.p
        if kind == "shortest_path":
            hops = self._hops[self.image.index[x]][self.image.index[y]]
            return Distance(Fraction(hops))
        if p == 1:
            return Distance(Fraction(sum(abs(a - b) for a, b in zip(x, y))))
        if p == INF:
            return Distance(Fraction(max(abs(a - b) for a, b in zip(x, y))))
        sq = sum((a - b) ** 2 for a, b in zip(x, y))
        return Distance(math.sqrt(sq), sq=sq)

    def d(self, x: Point, y: Point) -> Distance:
        """Distance between two points of the image."""
        if x not in self.image:
            raise ValueError(f"point {x} is not in the image")
        if y not in self.image:
            raise ValueError(f"point {y} is not in the image")
        return self._dist(x, y)

    @cached_property
    def scalars(self) -> tuple[tuple[Scalar, ...], ...]:
        """Distance table over point indices: ints when exact, floats for l_2."""
        pts = self.image.sorted_points
        rows = []
        for x in pts:
            row = []
            for y in pts:
                dist = self._dist(x, y)
                if dist.is_exact:
                    row.append(int(dist.value))
                else:
                    row.append(float(dist.value))
            rows.append(tuple(row))
        return tuple(rows)

    @cached_property
    def zeros(self) -> tuple[tuple[bool, ...], ...]:
        """Exact zero-distance pattern of the metric, over point indices."""
        return tuple(tuple(v == 0 for v in row) for row in self.scalars)


def distance(space: MetricSpace, x: Point, y: Point) -> Distance:
    """The l_p value, or the shortest-path hop count, between x and y."""
    return space.d(x, y)


def min_positive_distance(space: MetricSpace) -> Distance | None:
    """Minimum distance over distinct pairs; None for singleton images.

    Any epsilon at or below this value witnesses uniform discreteness:
    d(x, y) < epsilon forces x = y.
    """
    pts = space.image.sorted_points
    if len(pts) < 2:
        return None
    best: Distance | None = None
    for i, x in enumerate(pts):
        for y in pts[i + 1 :]:
            cand = space._dist(x, y)
            if best is None or float(cand) < float(best):
                best = cand
    return best


@dataclass(frozen=True)
class EventuallyPeriodicSequence:
    """Finite encoding of an infinite sequence: a preamble, then a cycle
    repeated forever.  The cycle must be nonempty."""

    preamble: tuple[Point, ...]
    cycle: tuple[Point, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "preamble", tuple(tuple(p) for p in self.preamble))
        object.__setattr__(self, "cycle", tuple(tuple(p) for p in self.cycle))
        if not self.cycle:
            raise ValueError("cycle must be nonempty")


def is_eventually_constant(s: EventuallyPeriodicSequence) -> bool:
    """Whether the sequence is constant from some index on.

    Decided combinatorially: the cycle collapses to a single value.
    """
    return len(set(s.cycle)) == 1


def is_cauchy(space: MetricSpace, s: EventuallyPeriodicSequence) -> bool:
    """Whether the encoded sequence is Cauchy in the bound space.

    Decided with the metric: a finite space is uniformly discrete, so it
    suffices to test the tail against epsilon = min positive distance.
    Tail values at distance >= epsilon recur forever, defeating the
    Cauchy condition; otherwise all tail values coincide.
    """
    for p in s.preamble + s.cycle:
        if p not in space.image:
            raise ValueError(f"sequence point {p} is not in the image")
    eps = min_positive_distance(space)
    if eps is None:
        return True
    values = sorted(set(s.cycle))
    for i, x in enumerate(values):
        for y in values[i + 1 :]:
            if ge(float(space.d(x, y)), float(eps)):
                return False
    return True
