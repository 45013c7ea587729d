"""Finite point sets in Z^n with a c_u adjacency, viewed as graphs.

A digital image is a nonempty finite set of integer lattice points
together with an adjacency relation from the c_u family: two distinct
points are c_u-adjacent when they differ by exactly 1 in at least one
and at most u coordinates and agree everywhere else.  All graph queries
here are pure functions over immutable values.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

Point = tuple[int, ...]


def cu_adjacent(x: Point, y: Point, u: int) -> bool:
    """Decide c_u adjacency of two points of Z^n.

    True iff x != y, between 1 and u coordinates differ by exactly 1,
    and every other coordinate is equal.  Any coordinate differing by
    more than 1 rules adjacency out.
    """
    n = len(x)
    if len(y) != n:
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    if not 1 <= u <= n:
        raise ValueError(f"u out of range: need 1 <= u <= {n}, got {u}")
    steps = 0
    for a, b in zip(x, y):
        diff = a - b
        if diff == 0:
            continue
        if diff != 1 and diff != -1:
            return False
        steps += 1
        if steps > u:
            return False
    return steps >= 1


@dataclass(frozen=True)
class AdjacencySpec:
    """The c_u adjacency family; u bounds how many coordinates may step."""

    u: int
    family: str = "cu"

    def __post_init__(self) -> None:
        if self.family != "cu":
            raise ValueError(f"unsupported adjacency family: {self.family!r}")
        if self.u < 1:
            raise ValueError(f"u must be >= 1, got {self.u}")


@dataclass(frozen=True)
class DigitalImage:
    """A nonempty finite subset of Z^n with a c_u adjacency.

    Point dimensions and the bound u <= n are validated once at
    construction, so per-query errors reduce to membership checks.
    """

    dimension: int
    points: frozenset[Point]
    adjacency: AdjacencySpec

    def __post_init__(self) -> None:
        pts = frozenset(tuple(int(c) for c in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if not pts:
            raise ValueError("a digital image must contain at least one point")
        for p in pts:
            if len(p) != self.dimension:
                raise ValueError(
                    f"point {p} has dimension {len(p)}, expected {self.dimension}"
                )
        if self.adjacency.u > self.dimension:
            raise ValueError(
                f"adjacency u={self.adjacency.u} exceeds dimension {self.dimension}"
            )

    @classmethod
    def of(
        cls,
        points: Iterable[Iterable[int]],
        u: int = 1,
        dimension: int | None = None,
    ) -> "DigitalImage":
        """Build an image from any iterable of coordinate sequences."""
        pts = [tuple(int(c) for c in p) for p in points]
        if not pts:
            raise ValueError("a digital image must contain at least one point")
        dim = dimension if dimension is not None else len(pts[0])
        return cls(dim, frozenset(pts), AdjacencySpec(u))

    @cached_property
    def sorted_points(self) -> tuple[Point, ...]:
        """Points in lexicographic order; the canonical indexing everywhere."""
        return tuple(sorted(self.points))

    @cached_property
    def index(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.sorted_points)}

    @cached_property
    def neighbor_indices(self) -> tuple[tuple[int, ...], ...]:
        """Adjacency lists over point indices, precomputed once."""
        pts = self.sorted_points
        u = self.adjacency.u
        return tuple(
            tuple(j for j, q in enumerate(pts) if j != i and cu_adjacent(p, q, u))
            for i, p in enumerate(pts)
        )

    def adjacent(self, x: Point, y: Point) -> bool:
        return cu_adjacent(x, y, self.adjacency.u)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self.points

    def __iter__(self):
        return iter(self.sorted_points)


def neighbors(image: DigitalImage, x: Point) -> frozenset[Point]:
    """All points of the image adjacent to x."""
    if x not in image:
        raise ValueError(f"point {x} is not in the image")
    i = image.index[x]
    pts = image.sorted_points
    return frozenset(pts[j] for j in image.neighbor_indices[i])


def is_connected_subset(image: DigitalImage, subset: Iterable[Point]) -> bool:
    """Whether the induced subgraph on ``subset`` is connected.

    The empty subset counts as connected (vacuous truth).
    """
    sub = frozenset(tuple(p) for p in subset)
    stray = sub - image.points
    if stray:
        raise ValueError(f"subset not contained in image: {sorted(stray)}")
    if len(sub) <= 1:
        return True
    idx = image.index
    members = {idx[p] for p in sub}
    start = next(iter(members))
    seen = {start}
    frontier = deque([start])
    nbrs = image.neighbor_indices
    while frontier:
        i = frontier.popleft()
        for j in nbrs[i]:
            if j in members and j not in seen:
                seen.add(j)
                frontier.append(j)
    return len(seen) == len(members)


def is_connected(image: DigitalImage) -> bool:
    """Whether every pair of points is joined by a chain of adjacent points."""
    return is_connected_subset(image, image.points)


def connected_components(image: DigitalImage) -> tuple[frozenset[Point], ...]:
    """Partition of the points into maximal connected blocks.

    Blocks appear in order of their lexicographically smallest point.
    """
    pts = image.sorted_points
    nbrs = image.neighbor_indices
    assigned = [False] * len(pts)
    blocks: list[frozenset[Point]] = []
    for start in range(len(pts)):
        if assigned[start]:
            continue
        seen = {start}
        frontier = deque([start])
        assigned[start] = True
        while frontier:
            i = frontier.popleft()
            for j in nbrs[i]:
                if not assigned[j]:
                    assigned[j] = True
                    seen.add(j)
                    frontier.append(j)
        blocks.append(frozenset(pts[i] for i in seen))
    return tuple(blocks)
