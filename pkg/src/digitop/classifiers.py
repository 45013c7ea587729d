"""Decidable map classifiers: contraction, Geraghty, expansive,
weighted-expansive, weakly-uniformly-strict, and admissibility checks,
plus a small closed-form function harness for the psi/phi classes.

Strict inequalities over l_2 use the tau-margin rule from the metrics
module; over rational-valued metrics all comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

from .lattice import DigitalImage, Point
from .maps import AffineIntMap, SelfMap
from .metrics import TAU, MetricSpace, Scalar, ge, le, lt


# ---------------------------------------------------------------------------
# Weight functions (the alpha / beta tables over ordered point pairs)


@dataclass(frozen=True, eq=True)
class WeightFunction:
    """A total table (x, y) -> nonnegative rational over ordered pairs."""

    image: DigitalImage
    entries: tuple[tuple[Point, Point, Fraction], ...]

    def __post_init__(self) -> None:
        norm = tuple(
            (tuple(x), tuple(y), Fraction(v)) for x, y, v in sorted(self.entries)
        )
        object.__setattr__(self, "entries", norm)
        pairs = {(x, y) for x, y, _ in norm}
        expected = {
            (x, y) for x in self.image.sorted_points for y in self.image.sorted_points
        }
        if pairs != expected:
            raise ValueError("weight table must cover every ordered pair exactly once")
        if len(norm) != len(expected):
            raise ValueError("weight table has duplicate pairs")
        for _, _, v in norm:
            if v < 0:
                raise ValueError(f"weights are nonnegative, got {v}")

    @classmethod
    def from_dict(
        cls, image: DigitalImage, table: Mapping[tuple[Point, Point], object]
    ) -> "WeightFunction":
        return cls(
            image,
            tuple((x, y, Fraction(v)) for (x, y), v in table.items()),
        )

    @classmethod
    def constant(cls, image: DigitalImage, value: object) -> "WeightFunction":
        v = Fraction(value)
        pts = image.sorted_points
        return cls(image, tuple((x, y, v) for x in pts for y in pts))

    @cached_property
    def _lookup(self) -> dict[tuple[Point, Point], Fraction]:
        return {(x, y): v for x, y, v in self.entries}

    def __call__(self, x: Point, y: Point) -> Fraction:
        try:
            return self._lookup[(tuple(x), tuple(y))]
        except KeyError:
            raise ValueError(f"pair ({x}, {y}) is not in the weight table") from None


# ---------------------------------------------------------------------------
# Closed-form test functions on [0, oo)


@dataclass(frozen=True)
class LinearFn:
    """t -> k*t with k >= 0."""

    k: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", Fraction(self.k))
        if self.k < 0:
            raise ValueError("linear coefficient must be nonnegative")


@dataclass(frozen=True)
class PowerFn:
    """t -> c * t**e with c >= 0 and integer e >= 0."""

    c: Fraction
    e: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", Fraction(self.c))
        if self.c < 0:
            raise ValueError("power coefficient must be nonnegative")
        if not isinstance(self.e, int) or self.e < 0:
            raise ValueError("power exponent must be a nonnegative integer")


@dataclass(frozen=True)
class ConstantFn:
    """t -> c with c >= 0."""

    c: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", Fraction(self.c))
        if self.c < 0:
            raise ValueError("constant value must be nonnegative")


@dataclass(frozen=True)
class StepFn:
    """Right-continuous step function: value of the greatest breakpoint
    at or below t, and 0 below the first breakpoint.

    Breakpoint thresholds must be strictly increasing and nonnegative.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        bps = tuple(
            (Fraction(t), Fraction(v)) for t, v in self.breakpoints
        )
        object.__setattr__(self, "breakpoints", bps)
        if not bps:
            raise ValueError("step table needs at least one breakpoint")
        prev = None
        for t, v in bps:
            if t < 0 or v < 0:
                raise ValueError("step breakpoints and values are nonnegative")
            if prev is not None and t <= prev:
                raise ValueError("step breakpoints must be strictly increasing")
            prev = t


ClosedFormFn = Union[LinearFn, PowerFn, ConstantFn, StepFn]


def evaluate(fn: ClosedFormFn, t: Scalar) -> Scalar:
    """Evaluate a closed form; exact on rationals, float on floats."""
    if isinstance(fn, LinearFn):
        return fn.k * t
    if isinstance(fn, PowerFn):
        return fn.c * t**fn.e
    if isinstance(fn, ConstantFn):
        return fn.c
    value: Scalar = Fraction(0)
    for threshold, v in fn.breakpoints:
        if threshold <= t:
            value = v
        else:
            break
    return value


def is_nondecreasing(fn: ClosedFormFn) -> bool:
    """Global monotonicity by closed-form analysis."""
    if isinstance(fn, StepFn):
        values = [v for _, v in fn.breakpoints]
        return all(a <= b for a, b in zip(values, values[1:]))
    return True  # linear/power/constant with nonnegative parameters


def _in_phi_globally(fn: ClosedFormFn) -> bool:
    """Membership in the increasing-and-below-identity class on all of
    [0, oo), where the form admits an exact answer."""
    if isinstance(fn, LinearFn):
        return 0 < fn.k < 1
    if isinstance(fn, PowerFn):
        return fn.e == 1 and 0 < fn.c < 1
    return False  # constants and steps are never strictly increasing


def _check_grid(grid: Iterable[Fraction]) -> tuple[Fraction, ...]:
    pts = tuple(Fraction(t) for t in grid)
    if sorted(pts) != list(pts):
        raise ValueError("grid must be sorted")
    if Fraction(0) not in pts:
        raise ValueError("grid must include 0")
    if any(t < 0 for t in pts):
        raise ValueError("grid points must be nonnegative")
    return pts


def psi_class_check(fn: ClosedFormFn, grid: Iterable[Fraction]) -> bool:
    """Nondecreasing with value 0 at 0: checked on the grid and by
    closed-form analysis."""
    pts = _check_grid(grid)
    if evaluate(fn, Fraction(0)) != 0:
        return False
    vals = [evaluate(fn, t) for t in pts]
    if any(a > b for a, b in zip(vals, vals[1:])):
        return False
    return is_nondecreasing(fn)


def phi_class_check(fn: ClosedFormFn, grid: Iterable[Fraction]) -> bool:
    """Increasing, below the identity for t > 0, and 0 at 0."""
    pts = _check_grid(grid)
    if evaluate(fn, Fraction(0)) != 0:
        return False
    vals = [evaluate(fn, t) for t in pts]
    if any(a >= b for a, b in zip(vals, vals[1:])):
        return False
    if any(t > 0 and evaluate(fn, t) >= t for t in pts):
        return False
    return _in_phi_globally(fn)


# ---------------------------------------------------------------------------
# Pairwise classifiers over a metric space


def _pairs(image: DigitalImage):
    pts = image.sorted_points
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            yield i, j, pts[i], pts[j]


@dataclass(frozen=True)
class ContractionVerdict:
    """Outcome of the modulus computation: k* and whether k* < 1."""

    is_contraction: bool
    modulus: Fraction | float


def contraction_modulus(
    f: SelfMap, space: MetricSpace, tau: float = TAU
) -> ContractionVerdict:
    """Maximum of d(fx, fy) / d(x, y) over distinct pairs.

    A singleton image has no pairs and gets modulus 0.
    """
    table = space.scalars
    fi = f.idx
    worst: Fraction | float = Fraction(0)
    for i, j, _, _ in _pairs(f.image):
        den = table[i][j]
        num = table[fi[i]][fi[j]]
        ratio: Fraction | float
        if isinstance(den, float) or isinstance(num, float):
            ratio = float(num) / float(den)
        else:
            ratio = Fraction(num, den)
        if ratio > worst:
            worst = ratio
    return ContractionVerdict(lt(worst, Fraction(1), tau), worst)


@dataclass(frozen=True)
class GeraghtyVerdict:
    """Strict pairwise distance decrease, with the max-ratio witness.

    On finite images the class coincides with maps admitting a modulus
    below 1, and ``modulus`` is exactly that reusable constant.
    """

    holds: bool
    modulus: Fraction | float | None
    failing_pair: tuple[Point, Point] | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_geraghty(f: SelfMap, space: MetricSpace, tau: float = TAU) -> GeraghtyVerdict:
    """d(fx, fy) < d(x, y) for every distinct pair, strictly."""
    table = space.scalars
    fi = f.idx
    worst: Fraction | float = Fraction(0)
    for i, j, x, y in _pairs(f.image):
        den = table[i][j]
        num = table[fi[i]][fi[j]]
        if not lt(num, den, tau):
            return GeraghtyVerdict(False, None, (x, y))
        if isinstance(den, float) or isinstance(num, float):
            ratio: Fraction | float = float(num) / float(den)
        else:
            ratio = Fraction(num, den)
        if ratio > worst:
            worst = ratio
    return GeraghtyVerdict(True, worst)


def is_geraghty_pair(
    S: SelfMap, T: SelfMap, space: MetricSpace, tau: float = TAU
) -> bool:
    """d(Sx, Sy) strictly below d(Tx, Ty) wherever the latter is positive,
    and zero wherever it vanishes."""
    if S.image != T.image:
        raise ValueError("maps are bound to different images")
    table = space.scalars
    si, ti = S.idx, T.idx
    for i, j, _, _ in _pairs(S.image):
        dt = table[ti[i]][ti[j]]
        ds = table[si[i]][si[j]]
        if dt == 0:
            if ds != 0:
                return False
        elif not lt(ds, dt, tau):
            return False
    return True


def is_expansive(
    f: SelfMap | AffineIntMap, space: MetricSpace | None = None, tau: float = TAU
) -> bool:
    """d(fx, fy) >= d(x, y) for all pairs.

    Affine maps on Z are handled symbolically: |a| >= 1.
    """
    if isinstance(f, AffineIntMap):
        return abs(f.a) >= 1
    if space is None:
        raise ValueError("table maps need a metric space")
    table = space.scalars
    fi = f.idx
    for i, j, _, _ in _pairs(f.image):
        if not ge(table[fi[i]][fi[j]], table[i][j], tau):
            return False
    return True


@dataclass(frozen=True)
class AlphaPsiVerdict:
    holds: bool
    failing_pair: tuple[Point, Point] | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_alpha_psi_expansive(
    f: SelfMap,
    alpha: WeightFunction,
    psi: ClosedFormFn,
    space: MetricSpace,
    tau: float = TAU,
) -> AlphaPsiVerdict:
    """psi(d(fx, fy)) >= alpha(x, y) * d(x, y) over all ordered pairs;
    returns the first failing pair otherwise."""
    pts = f.image.sorted_points
    table = space.scalars
    fi = f.idx
    for i, x in enumerate(pts):
        for j, y in enumerate(pts):
            lhs = evaluate(psi, table[fi[i]][fi[j]])
            rhs = alpha(x, y) * table[i][j]
            if not ge(lhs, rhs, tau):
                return AlphaPsiVerdict(False, (x, y))
    return AlphaPsiVerdict(True)


def is_wus_contraction(f: SelfMap, space: MetricSpace, tau: float = TAU) -> bool:
    """The weakly-uniformly-strict criterion, decided literally.

    For each epsilon in the realized positive distance set, a concrete
    delta (half the gap to the next realized distance) is chosen and the
    defining implication  epsilon <= d(x, y) < epsilon + delta  =>
    d(fx, fy) < epsilon  is checked over all pairs.  Non-realized
    epsilon admit a window containing no pair, so this decides the full
    quantifier on a finite space.  Deliberately not implemented via the
    pairwise-decrease shortcut, so agreement with the Geraghty checker
    is evidence rather than tautology.
    """
    table = space.scalars
    fi = f.idx
    pairs = list(_pairs(f.image))
    realized = sorted({table[i][j] for i, j, _, _ in pairs if table[i][j] != 0})
    for idx, eps in enumerate(realized):
        if idx + 1 < len(realized):
            gap = realized[idx + 1] - eps
            delta = gap / 2 if isinstance(gap, float) else Fraction(gap, 2)
        else:
            delta = 1
        upper = eps + delta
        for i, j, _, _ in pairs:
            dxy = table[i][j]
            if eps <= dxy < upper:
                if not lt(table[fi[i]][fi[j]], eps, tau):
                    return False
    return True


def is_alpha_admissible(f: SelfMap, alpha: WeightFunction) -> bool:
    """alpha(x, y) >= 1 propagates to alpha(fx, fy) >= 1, over all
    ordered pairs.  Exact rational comparisons."""
    pts = f.image.sorted_points
    table = f.as_table()
    for x in pts:
        for y in pts:
            if alpha(x, y) >= 1 and alpha(table[x], table[y]) < 1:
                return False
    return True


def is_alpha_beta_admissible_wrt(
    S: SelfMap, T: SelfMap, alpha: WeightFunction, beta: WeightFunction
) -> bool:
    """Joint admissibility of S with respect to T under two weights."""
    if S.image != T.image:
        raise ValueError("maps are bound to different images")
    pts = S.image.sorted_points
    s_table, t_table = S.as_table(), T.as_table()
    for x in pts:
        for y in pts:
            tx, ty = t_table[x], t_table[y]
            if alpha(tx, ty) >= 1 and beta(tx, ty) >= 1:
                sx, sy = s_table[x], s_table[y]
                if alpha(sx, sy) < 1 or beta(sx, sy) < 1:
                    return False
    return True


# ---------------------------------------------------------------------------
# Iterate harness for the psi trivialities


def _require_nondecreasing(psi: ClosedFormFn) -> None:
    if not is_nondecreasing(psi):
        raise ValueError("psi must be nondecreasing")


def _iterates(psi: ClosedFormFn, t0: Fraction, n: int) -> list[Fraction]:
    """First n iterates psi(t0), psi^2(t0), ...; once the chain repeats a
    value it is constant forever, so the tail is filled without
    re-evaluating."""
    out: list[Fraction] = []
    current = t0
    while len(out) < n:
        nxt = evaluate(psi, current)
        out.append(nxt)
        if nxt == current:
            out.extend([nxt] * (n - len(out)))
            break
        current = nxt
    return out


@dataclass(frozen=True)
class PsiSummableVerdict:
    """Outcome of the summability obstruction check at scale N.

    ``certified-divergence`` means q = psi(t0) > 0 and psi(q) >= q, so
    the iterate chain is bounded below by q and the partial sum grows at
    least linearly: the series over iterates cannot converge.
    ``induction-step-fails`` flags psi(q) < q: the linear lower bound is
    not available for this psi, and the computed trajectory is reported
    instead of assuming it.
    """

    status: str  # "certified-divergence" | "no-obstruction" | "induction-step-fails"
    t0: Fraction
    q: Fraction
    steps: int
    partial_sum: Fraction | None = None
    iterate_floor: Fraction | None = None
    trajectory: tuple[Fraction, ...] | None = None


def psi_summable_forces_zero_witness(
    psi: ClosedFormFn, t0: Fraction, n_steps: int
) -> PsiSummableVerdict:
    """Certify, when possible, that sum over n of psi^n(t0) diverges."""
    _require_nondecreasing(psi)
    t0 = Fraction(t0)
    if t0 <= 0:
        raise ValueError("t0 must be positive")
    if n_steps < 1:
        raise ValueError("need at least one step")
    q = Fraction(evaluate(psi, t0))
    if q == 0:
        return PsiSummableVerdict("no-obstruction", t0, q, n_steps)
    chain = _iterates(psi, t0, n_steps)
    partial = sum(chain, Fraction(0))
    if evaluate(psi, q) >= q:
        floor = min(chain)
        assert floor >= q and partial >= n_steps * q
        return PsiSummableVerdict(
            "certified-divergence",
            t0,
            q,
            n_steps,
            partial_sum=partial,
            iterate_floor=floor,
        )
    return PsiSummableVerdict(
        "induction-step-fails",
        t0,
        q,
        n_steps,
        partial_sum=partial,
        trajectory=tuple(chain),
    )


@dataclass(frozen=True)
class PsiIterateVerdict:
    """Outcome of the vanishing-iterates check.

    ``bounded-below`` certifies lim psi^n(t0) != 0 via the floor q;
    ``vanishing`` means psi(t0) = 0 and the chain is identically zero;
    ``inconclusive`` reports the trajectory when neither bound applies.
    """

    status: str  # "bounded-below" | "vanishing" | "inconclusive"
    t0: Fraction
    q: Fraction
    steps: int
    bound: Fraction | None = None
    trajectory: tuple[Fraction, ...] = ()


def psi_vanishing_iterates_check(
    psi: ClosedFormFn, t0: Fraction, n_steps: int
) -> PsiIterateVerdict:
    """Test whether the iterate chain from t0 can vanish in the limit."""
    _require_nondecreasing(psi)
    t0 = Fraction(t0)
    if t0 <= 0:
        raise ValueError("t0 must be positive")
    if n_steps < 1:
        raise ValueError("need at least one step")
    q = Fraction(evaluate(psi, t0))
    chain = tuple(_iterates(psi, t0, n_steps))
    if q == 0:
        return PsiIterateVerdict("vanishing", t0, q, n_steps, trajectory=chain)
    if evaluate(psi, q) >= q:
        assert min(chain) >= q
        return PsiIterateVerdict(
            "bounded-below", t0, q, n_steps, bound=q, trajectory=chain
        )
    return PsiIterateVerdict("inconclusive", t0, q, n_steps, trajectory=chain)
