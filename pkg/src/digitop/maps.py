"""Self-maps on digital images, digital continuity, fixed points, orbits.

A self-map is a total function table over the image's points; the
constructor rejects tables whose values leave the image rather than
clamping them.  Affine maps x -> a*x + b on all of Z cover the two
infinite-domain counterexamples symbolically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping

from .errors import BudgetExceededError
from .lattice import DigitalImage, Point, is_connected_subset

#: Default cap on |X|^|X| for exhaustive map enumeration.
DEFAULT_ENUM_BUDGET = 10_000_000

#: Default cap on |X| for the subset-based continuity oracle (2^|X| subsets).
SUBSET_ORACLE_CAP = 12


@dataclass(frozen=True)
class SelfMap:
    """A total function X -> X as a value table over sorted points."""

    image: DigitalImage
    values: tuple[Point, ...]

    def __post_init__(self) -> None:
        vals = tuple(tuple(int(c) for c in v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(self.image):
            raise ValueError(
                f"table has {len(vals)} entries for an image of {len(self.image)} points"
            )
        for v in vals:
            if v not in self.image.points:
                raise ValueError(f"value {v} is not a point of the image")

    @classmethod
    def from_table(cls, image: DigitalImage, table: Mapping[Point, Point]) -> "SelfMap":
        """Build from an argument -> value mapping; must be total."""
        keys = {tuple(k) for k in table}
        missing = image.points - keys
        if missing:
            raise ValueError(f"table is not total; missing {sorted(missing)}")
        extra = keys - image.points
        if extra:
            raise ValueError(f"table has arguments outside the image: {sorted(extra)}")
        values = tuple(tuple(table[p]) for p in image.sorted_points)
        return cls(image, values)

    @classmethod
    def identity(cls, image: DigitalImage) -> "SelfMap":
        return cls(image, image.sorted_points)

    @classmethod
    def constant(cls, image: DigitalImage, c: Point) -> "SelfMap":
        c = tuple(c)
        if c not in image:
            raise ValueError(f"constant value {c} is not in the image")
        return cls(image, (c,) * len(image))

    @cached_property
    def idx(self) -> tuple[int, ...]:
        """Value indices aligned with the image's sorted points."""
        index = self.image.index
        return tuple(index[v] for v in self.values)

    def __call__(self, x: Point) -> Point:
        i = self.image.index.get(tuple(x))
        if i is None:
            raise ValueError(f"point {x} is not in the image")
        return self.values[i]

    def as_table(self) -> dict[Point, Point]:
        return dict(zip(self.image.sorted_points, self.values))


@dataclass(frozen=True)
class AffineIntMap:
    """The map x -> a*x + b on all of Z."""

    a: int
    b: int

    def __call__(self, x: int) -> int:
        return self.a * x + self.b


@dataclass(frozen=True)
class AffineFixedPoints:
    """Fixed-point set of an affine map on Z: everything, nothing, or one point."""

    kind: str  # "all-of-Z" | "empty" | "singleton"
    point: int | None = None


def affine_fixed_points(m: AffineIntMap) -> AffineFixedPoints:
    """Solve a*x + b = x over Z exactly."""
    if m.a == 1:
        if m.b == 0:
            return AffineFixedPoints("all-of-Z")
        return AffineFixedPoints("empty")
    num, den = m.b, 1 - m.a
    if num % den == 0:
        return AffineFixedPoints("singleton", num // den)
    return AffineFixedPoints("empty")


def fixed_points(f: SelfMap) -> frozenset[Point]:
    """Exactly the points x with f(x) = x."""
    pts = f.image.sorted_points
    return frozenset(pts[i] for i, v in enumerate(f.idx) if v == i)


def is_constant(f: SelfMap) -> bool:
    return len(set(f.values)) == 1


def is_continuous_adjacency(image: DigitalImage, f: SelfMap) -> bool:
    """Continuity by the adjacency criterion: adjacent points map to
    equal or adjacent points.

    The adjacency is taken from ``image``, so a map can be tested
    against a rebound adjacency (e.g. the c_1 view of a c_2 image)
    as long as the point sets agree.
    """
    if f.image.points != image.points:
        raise ValueError("map is not defined on the given image's points")
    pts = image.sorted_points
    table = f.as_table()
    for i, nbrs in enumerate(image.neighbor_indices):
        x = pts[i]
        fx = table[x]
        for j in nbrs:
            if j < i:
                continue
            fy = table[pts[j]]
            if fx != fy and not image.adjacent(fx, fy):
                return False
    return True


def first_discontinuity(image: DigitalImage, f: SelfMap) -> tuple[Point, Point] | None:
    """First adjacent pair violating the continuity criterion, if any."""
    if f.image.points != image.points:
        raise ValueError("map is not defined on the given image's points")
    pts = image.sorted_points
    table = f.as_table()
    for i, nbrs in enumerate(image.neighbor_indices):
        x = pts[i]
        fx = table[x]
        for j in nbrs:
            if j < i:
                continue
            y = pts[j]
            fy = table[y]
            if fx != fy and not image.adjacent(fx, fy):
                return (x, y)
    return None


def is_continuous_subsets(
    image: DigitalImage, f: SelfMap, size_cap: int = SUBSET_ORACLE_CAP
) -> bool:
    """Continuity by the subset criterion: images of connected subsets
    are connected.

    Enumerates all 2^|X| subsets, so it exists as an oracle for small
    images, not a production path.
    """
    if f.image.points != image.points:
        raise ValueError("map is not defined on the given image's points")
    n = len(image)
    if n > size_cap:
        raise BudgetExceededError(
            f"subset continuity oracle capped at {size_cap} points, image has {n}"
        )
    pts = image.sorted_points
    table = f.as_table()
    for mask in range(1, 1 << n):
        subset = [pts[i] for i in range(n) if mask & (1 << i)]
        if not is_connected_subset(image, subset):
            continue
        if not is_connected_subset(image, {table[p] for p in subset}):
            return False
    return True


@dataclass(frozen=True)
class Orbit:
    """Iteration trace of a self-map from a start point.

    The trace stops at the first repeated point (kept, so a closing
    cycle or a reached fixed point is visible) or after ``max_steps``
    applications.  ``fixed_point`` is set iff iteration hit f(x) = x.
    """

    points: tuple[Point, ...]
    fixed_point: Point | None

    @property
    def reached_fixed_point(self) -> bool:
        return self.fixed_point is not None


def orbit(f: SelfMap, x0: Point, max_steps: int) -> Orbit:
    """Iterate f from x0: x0, f(x0), f^2(x0), ..."""
    x0 = tuple(x0)
    if x0 not in f.image:
        raise ValueError(f"start point {x0} is not in the image")
    trace = [x0]
    seen = {x0}
    current = x0
    for _ in range(max_steps):
        nxt = f(current)
        trace.append(nxt)
        if nxt == current:
            return Orbit(tuple(trace), nxt)
        if nxt in seen:
            return Orbit(tuple(trace), None)
        seen.add(nxt)
        current = nxt
    return Orbit(tuple(trace), None)


def compose(f: SelfMap, g: SelfMap) -> SelfMap:
    """Pointwise composition f after g on a shared image."""
    if f.image != g.image:
        raise ValueError("cannot compose maps bound to different images")
    pts = f.image.sorted_points
    fi, gi = f.idx, g.idx
    return SelfMap(f.image, tuple(pts[fi[gi[i]]] for i in range(len(pts))))


def enumerate_self_maps(
    image: DigitalImage, budget: int = DEFAULT_ENUM_BUDGET
) -> Iterator[SelfMap]:
    """Every total self-map exactly once, in a deterministic order.

    Points are sorted lexicographically and maps are enumerated as
    base-|X| counters over value tuples (last point varies fastest), so
    witnesses are reproducible across runs.
    """
    n = len(image)
    total = n**n
    if total > budget:
        raise BudgetExceededError(
            f"|X|^|X| = {total} exceeds the enumeration budget {budget}"
        )
    pts = image.sorted_points
    for values in itertools.product(pts, repeat=n):
        yield SelfMap(image, values)


def count_self_maps(image: DigitalImage) -> int:
    n = len(image)
    return n**n
