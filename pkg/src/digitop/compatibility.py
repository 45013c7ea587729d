"""Compatibility of map pairs: the pointwise form, the limit form, and
its K and R variants, as decidable finite-space checks.

On a uniformly discrete space, any sequence whose f- and g-images both
converge to a common point t is eventually valued inside the
coincidence class C_t = {x : f(x) = g(x) = t}, and constant sequences
at coincidence points realize the necessity direction.  Each limit
definition therefore reduces to pointwise identities on the coincidence
set.  The three reductions are implemented independently, one per
definition, and a fourth, definition-literal sequence oracle evaluates
the limit conditions with the metric over enumerated sequence schemas;
their exhaustive agreement is checked by the test suite rather than
built in.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import BudgetExceededError
from .lattice import DigitalImage, Point
from .maps import DEFAULT_ENUM_BUDGET, SelfMap, enumerate_self_maps
from .metrics import TAU, MetricSpace, le

#: Cap on image size for the sequence-schema oracle.
ORACLE_SIZE_CAP = 16


@dataclass(frozen=True)
class MapPair:
    """Two self-maps on a shared image."""

    f: SelfMap
    g: SelfMap

    def __post_init__(self) -> None:
        if self.f.image is not self.g.image and self.f.image != self.g.image:
            raise ValueError("pair members are bound to different images")


@dataclass(frozen=True)
class CoincidenceSet:
    """Points where f and g agree, grouped by the common value t.

    ``by_value`` lists (t, members-of-C_t) sorted by t; the groups
    partition ``points``.
    """

    points: frozenset[Point]
    by_value: tuple[tuple[Point, tuple[Point, ...]], ...]


def _coincidence_indices(fi: tuple[int, ...], gi: tuple[int, ...]) -> list[int]:
    return [i for i in range(len(fi)) if fi[i] == gi[i]]


def coincidence_points(p: MapPair) -> CoincidenceSet:
    """The set {x : f(x) = g(x)} with its value classes."""
    pts = p.f.image.sorted_points
    fi, gi = p.f.idx, p.g.idx
    groups: dict[int, list[Point]] = {}
    members: list[Point] = []
    for i in _coincidence_indices(fi, gi):
        members.append(pts[i])
        groups.setdefault(fi[i], []).append(pts[i])
    by_value = tuple(
        (pts[t], tuple(sorted(groups[t]))) for t in sorted(groups)
    )
    return CoincidenceSet(frozenset(members), by_value)


def is_pointwise_compatible_chauhan(
    p: MapPair, space: MetricSpace, tau: float = TAU
) -> bool:
    """d(f(g(x)), g(f(x))) <= d(f(x), g(x)) at every point x."""
    table = space.scalars
    fi, gi = p.f.idx, p.g.idx
    for x in range(len(fi)):
        lhs = table[fi[gi[x]]][gi[fi[x]]]
        rhs = table[fi[x]][gi[x]]
        if not le(lhs, rhs, tau):
            return False
    return True


def is_compatible(p: MapPair, space: MetricSpace) -> bool:
    """Limit-form compatibility, reduced to the coincidence set:
    f(g(x)) = g(f(x)) at every x with f(x) = g(x)."""
    _require_bound(p, space)
    fi, gi = p.f.idx, p.g.idx
    return all(
        fi[gi[x]] == gi[fi[x]] for x in _coincidence_indices(fi, gi)
    )


def is_compatible_type_k(p: MapPair, space: MetricSpace) -> bool:
    """Type-K compatibility, reduced to the coincidence set: with
    t = f(x), both f(f(x)) = g(t) and g(g(x)) = f(t)."""
    _require_bound(p, space)
    fi, gi = p.f.idx, p.g.idx
    for x in _coincidence_indices(fi, gi):
        t = fi[x]
        if fi[fi[x]] != gi[t]:
            return False
        if gi[gi[x]] != fi[t]:
            return False
    return True


def is_compatible_type_r(p: MapPair, space: MetricSpace) -> bool:
    """Type-R compatibility, reduced to the coincidence set:
    f(g(x)) = g(f(x)) and f(f(x)) = g(g(x))."""
    _require_bound(p, space)
    fi, gi = p.f.idx, p.g.idx
    for x in _coincidence_indices(fi, gi):
        if fi[gi[x]] != gi[fi[x]]:
            return False
        if fi[fi[x]] != gi[gi[x]]:
            return False
    return True


def _require_bound(p: MapPair, space: MetricSpace) -> None:
    if p.f.image != space.image:
        raise ValueError("pair is not bound to the given space's image")


def _cycles(members: list[int]) -> Iterator[tuple[int, ...]]:
    """Eventually-periodic tail words over one class, cycle length <= 2."""
    for a in members:
        yield (a,)
    for a in members:
        for b in members:
            yield (a, b)


def sequence_oracle_compatibility(
    p: MapPair,
    space: MetricSpace,
    kind: str,
    size_cap: int = ORACLE_SIZE_CAP,
) -> bool:
    """Definition-literal oracle for the three compatibility notions.

    Enumerates sequence schemas: a tail that is an eventually-periodic
    word with cycle length at most 2 over a single coincidence class
    C_t.  For each schema the convergence premise and the defining limit
    condition of ``kind`` ("plain", "K" or "R") are evaluated literally
    with the metric; an eventually-periodic distance sequence has limit
    0 exactly when every cycle position yields 0.  Finite preambles
    (bounded at length 2 in the schema space) cannot change any limit,
    so the conjunction over them equals the tail condition and they are
    quantified out here.  Longer cycles add no discriminating power on a
    discrete space: the limit conditions depend only on the tail's value
    set.
    """
    if kind not in ("plain", "K", "R"):
        raise ValueError(f"unknown compatibility kind: {kind!r}")
    _require_bound(p, space)
    if len(p.f.image) > size_cap:
        raise BudgetExceededError(
            f"sequence oracle capped at {size_cap} points, image has {len(p.f.image)}"
        )
    fi, gi = p.f.idx, p.g.idx
    zeros = space.zeros
    groups: dict[int, list[int]] = {}
    for i in _coincidence_indices(fi, gi):
        groups.setdefault(fi[i], []).append(i)
    for t, members in groups.items():
        for cycle in _cycles(members):
            # Convergence premise, checked with the metric on the tail:
            # lim f(x_n) = t = lim g(x_n).
            if not all(zeros[fi[c]][t] and zeros[gi[c]][t] for c in cycle):
                continue
            if kind == "plain":
                ok = all(zeros[fi[gi[c]]][gi[fi[c]]] for c in cycle)
            elif kind == "K":
                ok = all(
                    zeros[fi[fi[c]]][gi[t]] and zeros[gi[gi[c]]][fi[t]]
                    for c in cycle
                )
            else:
                ok = all(
                    zeros[fi[gi[c]]][gi[fi[c]]] and zeros[fi[fi[c]]][gi[gi[c]]]
                    for c in cycle
                )
            if not ok:
                return False
    return True


@dataclass(frozen=True)
class PropVerdict:
    """Outcome of a checked proposition over a pair."""

    status: str  # "success" | "violation" | "precondition-failed"
    witness: Point | None = None

    @property
    def ok(self) -> bool:
        return self.status == "success"


def check_jainr32(p: MapPair, space: MetricSpace) -> PropVerdict:
    """For a type-R pair: at every t with f(t) = g(t), the composites
    f(g(t)), f(f(t)), g(g(t)), g(f(t)) all coincide."""
    if not is_compatible_type_r(p, space):
        return PropVerdict("precondition-failed")
    pts = p.f.image.sorted_points
    fi, gi = p.f.idx, p.g.idx
    for t in _coincidence_indices(fi, gi):
        fgt, fft, ggt, gft = fi[gi[t]], fi[fi[t]], gi[gi[t]], gi[fi[t]]
        if not (fgt == fft == ggt == gft):
            return PropVerdict("violation", pts[t])
    return PropVerdict("success")


def check_jainr33(p: MapPair, space: MetricSpace) -> PropVerdict:
    """For a type-R pair: at every common value t with nonempty class,
    (1) f(t) = g(t); (2) g(f(x)) = f(t) and (3) f(g(x)) = g(t) for every
    class member x; (4) f(g(t)) = g(f(t))."""
    if not is_compatible_type_r(p, space):
        return PropVerdict("precondition-failed")
    pts = p.f.image.sorted_points
    fi, gi = p.f.idx, p.g.idx
    groups: dict[int, list[int]] = {}
    for i in _coincidence_indices(fi, gi):
        groups.setdefault(fi[i], []).append(i)
    for t, members in groups.items():
        if fi[t] != gi[t]:
            return PropVerdict("violation", pts[t])
        for x in members:
            if gi[fi[x]] != fi[t] or fi[gi[x]] != gi[t]:
                return PropVerdict("violation", pts[x])
        if fi[gi[t]] != gi[fi[t]]:
            return PropVerdict("violation", pts[t])
    return PropVerdict("success")


def map_pairs(
    image: DigitalImage, budget: int = DEFAULT_ENUM_BUDGET
) -> Iterator[MapPair]:
    """All ordered self-map pairs on an image, in enumeration order."""
    maps_list = list(enumerate_self_maps(image, budget))
    if len(maps_list) ** 2 > budget:
        raise BudgetExceededError(
            f"|X|^(2|X|) = {len(maps_list) ** 2} exceeds the budget {budget}"
        )
    for f in maps_list:
        for g in maps_list:
            yield MapPair(f, g)


def agreement_sweep(
    image: DigitalImage, space: MetricSpace, budget: int = DEFAULT_ENUM_BUDGET
) -> tuple[int, list[dict]]:
    """Exhaustively compare the three reductions and the three oracle
    kinds over every ordered map pair.

    Returns the number of pairs checked and a list of disagreement
    records (empty when the notions coincide everywhere, as they must on
    a uniformly discrete space).
    """
    checked = 0
    mismatches: list[dict] = []
    for pair in map_pairs(image, budget):
        checked += 1
        verdicts = (
            is_compatible(pair, space),
            is_compatible_type_k(pair, space),
            is_compatible_type_r(pair, space),
            sequence_oracle_compatibility(pair, space, "plain"),
            sequence_oracle_compatibility(pair, space, "K"),
            sequence_oracle_compatibility(pair, space, "R"),
        )
        if any(v != verdicts[0] for v in verdicts[1:]):
            mismatches.append(
                {
                    "f": [list(v) for v in pair.f.values],
                    "g": [list(v) for v in pair.g.values],
                    "verdicts": list(verdicts),
                }
            )
    return checked, mismatches
