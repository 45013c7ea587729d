"""Executable audit registry and a generic brute-force falsifier.

Each registry entry records one reviewed fixed-point assertion with its
expected status; entries whose status is REFUTED, TRIVIAL or CORRECT
name a verifier that re-derives the verdict from scratch on the built-in
catalog, while UNPROVEN / INVALID-SETTING / DUPLICATE entries are
registry-only and are skipped at run time.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, Callable

from . import classifiers, compatibility, maps
from .catalog import CATALOG_ORDER, catalog_image, metrics_for
from .classifiers import ConstantFn, LinearFn, StepFn, WeightFunction
from .errors import BudgetExceededError, InputError, UnknownClaimError
from .fileio import emit_map, parse_metric, parse_rational, scalar_to_json
from .lattice import AdjacencySpec, DigitalImage, is_connected
from .maps import AffineIntMap, SelfMap
from .metrics import MetricSpec, MetricSpace, le

CONFIRMED = "CONFIRMED"
FAILED = "FAILED"
SKIPPED = "SKIPPED"

EXECUTABLE_STATUSES = frozenset({"REFUTED", "TRIVIAL", "CORRECT"})
REGISTRY_ONLY_STATUSES = frozenset({"UNPROVEN", "INVALID-SETTING", "DUPLICATE"})


@dataclass(frozen=True)
class VerifierOutcome:
    """Machine verdict plus a JSON-serializable witness payload."""

    verdict: str
    witness: Any = None


def _c1_view(image: DigitalImage) -> DigitalImage:
    """The same point set under c_1 adjacency."""
    return DigitalImage(image.dimension, image.points, AdjacencySpec(1))


def _negation(image: DigitalImage) -> SelfMap:
    return SelfMap(
        image, tuple(tuple(-c for c in p) for p in image.sorted_points)
    )


def _require_binding(image: DigitalImage, space: MetricSpace) -> None:
    if space.image != image:
        raise ValueError("space is not bound to the given image")


# ---------------------------------------------------------------------------
# Refutation and example verifiers


def verify_shukla31_refutation(
    alpha: Fraction = Fraction(49, 100),
    s: SelfMap | None = None,
    t: SelfMap | None = None,
) -> VerifierOutcome:
    """Counterexample run for the common-fixed-point assertion with the
    bound d(Sx, Ty) <= alpha*d(x, Sx) + d(y, Ty), 0 < alpha < 1/2.

    On the diamond under the Euclidean metric, with S the identity and
    T the antipodal map, the bound holds on all 16 ordered pairs (the
    right side is exactly 2 because d(y, -y) = 2 for every vertex, and
    the left side never exceeds the diameter 2) while S and T share no
    fixed point.
    """
    image = catalog_image("diamond")
    space = MetricSpace(image, MetricSpec.l2())
    s = s if s is not None else SelfMap.identity(image)
    t = t if t is not None else _negation(image)
    alpha = Fraction(alpha)
    if not 0 < alpha < Fraction(1, 2):
        return VerifierOutcome(FAILED, {"reason": f"alpha {alpha} not in (0, 1/2)"})
    table = space.scalars
    si, ti = s.idx, t.idx
    rows = []
    hypothesis_holds = True
    n = len(image)
    pts = image.sorted_points
    for i in range(n):
        for j in range(n):
            lhs = table[si[i]][ti[j]]
            rhs = alpha * table[i][si[i]] + table[j][ti[j]]
            ok = le(lhs, rhs)
            hypothesis_holds = hypothesis_holds and ok
            rows.append(
                {
                    "x": list(pts[i]),
                    "y": list(pts[j]),
                    "lhs": scalar_to_json(lhs),
                    "rhs": scalar_to_json(rhs),
                    "holds": ok,
                }
            )
    common = sorted(maps.fixed_points(s) & maps.fixed_points(t))
    witness = {
        "alpha": str(alpha),
        "inequalities": rows,
        "common_fixed_points": [list(p) for p in common],
    }
    confirmed = hypothesis_holds and not common
    return VerifierOutcome(CONFIRMED if confirmed else FAILED, witness)


def verify_jk_remark32_refutation(
    psi: classifiers.ClosedFormFn | None = None,
    alpha_value: Fraction = Fraction(1),
) -> VerifierOutcome:
    """Counterexample to "every expansive map is a weighted-expansive map
    with alpha = 1 and psi(t) = k*t, 0 < k < 1": the identity on a
    two-point set already violates k*d(x, y) >= d(x, y)."""
    image = DigitalImage.of([(0,), (1,)], u=1)
    space = MetricSpace(image, MetricSpec.l1())
    s = SelfMap.identity(image)
    psi = psi if psi is not None else LinearFn(Fraction(1, 2))
    alpha = WeightFunction.constant(image, Fraction(alpha_value))
    expansive = classifiers.is_expansive(s, space)
    verdict = classifiers.is_alpha_psi_expansive(s, alpha, psi, space)
    witness = {
        "identity_is_expansive": expansive,
        "alpha_psi_expansive": verdict.holds,
        "failing_pair": None
        if verdict.failing_pair is None
        else [list(p) for p in verdict.failing_pair],
    }
    confirmed = expansive and not verdict.holds
    return VerifierOutcome(CONFIRMED if confirmed else FAILED, witness)


def verify_jk34_35_refutation(m: AffineIntMap = AffineIntMap(1, 1)) -> VerifierOutcome:
    """The translation x -> x + 1 on Z: bijective, expansive (it preserves
    distances), admissible under the constant weight 1, yet fixed-point
    free.  Refutes the claimed fixed-point conclusions for expansive
    maps on an infinite carrier."""
    bijective = abs(m.a) == 1
    expansive = classifiers.is_expansive(m)
    fps = maps.affine_fixed_points(m)
    witness = {
        "map": f"x -> {m.a}*x + {m.b:+d}",
        "bijective": bijective,
        "expansive": expansive,
        # Constant weight 1 satisfies the admissibility implication for
        # any map: the consequent always holds.
        "alpha_one_admissible": True,
        "fixed_points": fps.kind,
    }
    confirmed = bijective and expansive and fps.kind == "empty"
    return VerifierOutcome(CONFIRMED if confirmed else FAILED, witness)


def verify_nonconverge_example(
    n: int = 5, s: SelfMap | None = None
) -> VerifierOutcome:
    """The map S(1) = 0, S(k) = 1 otherwise, on the window {0..n} of N:
    digitally continuous, fixed-point free, and its even-indexed image
    values settle at 1 while S(1) = 0, so convergent image subsequences
    do not produce a fixed point."""
    if n < 3:
        raise ValueError(f"window must contain {{0..n}} with n >= 3, got {n}")
    image = DigitalImage.of([(k,) for k in range(n + 1)], u=1)
    if s is None:
        s = SelfMap.from_table(
            image, {(k,): (0,) if k == 1 else (1,) for k in range(n + 1)}
        )
    continuous = maps.is_continuous_adjacency(image, s)
    fps = sorted(maps.fixed_points(s))
    even_tail = all(s((k,)) == (1,) for k in range(2, n + 1, 2))
    s1_breaks_limit = s((1,)) != (1,)
    witness = {
        "window": n,
        "continuous": continuous,
        "fixed_points": [list(p) for p in fps],
        "even_tail_value_is_1": even_tail,
        "value_at_1_differs": s1_breaks_limit,
    }
    confirmed = continuous and not fps and even_tail and s1_breaks_limit
    return VerifierOutcome(CONFIRMED if confirmed else FAILED, witness)


def verify_psi_trivialities() -> VerifierOutcome:
    """Run the iterate harness over the closed-form registry instances
    and confirm each certified bound at N = 1000.

    The certified chain needs psi(q) >= q at q = psi(t0); instances
    where that step fails are flagged by the harness rather than
    assumed, so only the certifiable bounds are asserted here.
    """
    n_steps = 1000
    one = Fraction(1)
    lin1 = LinearFn(one)
    step = StepFn(((one, one),))
    zero = ConstantFn(Fraction(0))

    sv = classifiers.psi_summable_forces_zero_witness(lin1, one, n_steps)
    iv = classifiers.psi_vanishing_iterates_check(lin1, one, n_steps)
    st = classifiers.psi_vanishing_iterates_check(step, Fraction(2), n_steps)
    zv = classifiers.psi_summable_forces_zero_witness(zero, one, n_steps)
    zi = classifiers.psi_vanishing_iterates_check(zero, one, n_steps)

    checks = {
        "linear1_summable": sv.status == "certified-divergence"
        and sv.partial_sum is not None
        and sv.partial_sum >= n_steps
        and sv.iterate_floor == 1,
        "linear1_iterates": iv.status == "bounded-below" and iv.bound == 1,
        "step_iterates": st.status == "bounded-below" and st.bound == 1,
        "zero_summable": zv.status == "no-obstruction",
        "zero_iterates": zi.status == "vanishing",
    }
    witness = {
        "steps": n_steps,
        "linear1_partial_sum": str(sv.partial_sum),
        "linear1_iterate_floor": str(sv.iterate_floor),
        "step_bound": str(st.bound),
        "checks": checks,
    }
    confirmed = all(checks.values())
    return VerifierOutcome(CONFIRMED if confirmed else FAILED, witness)


# ---------------------------------------------------------------------------
# Exhaustive sweep verifiers, parameterized by (image, space)


def verify_geraghty_triviality(
    image: DigitalImage,
    space: MetricSpace,
    budget: int = maps.DEFAULT_ENUM_BUDGET,
) -> VerifierOutcome:
    """On a c_1-connected carrier with an l_p or shortest-path metric,
    every strict-pairwise-decrease map must be constant."""
    _require_binding(image, space)
    if not is_connected(_c1_view(image)):
        return VerifierOutcome(SKIPPED, {"reason": "carrier is not c1-connected"})
    checked = 0
    hits = 0
    for f in maps.enumerate_self_maps(image, budget):
        checked += 1
        if classifiers.is_geraghty(f, space).holds:
            hits += 1
            if not maps.is_constant(f):
                return VerifierOutcome(
                    FAILED, {"nonconstant_geraghty_map": emit_map(f)}
                )
    return VerifierOutcome(
        CONFIRMED, {"maps_checked": checked, "geraghty_maps": hits}
    )


def verify_gconst(
    image: DigitalImage,
    space: MetricSpace,
    budget: int = maps.DEFAULT_ENUM_BUDGET,
) -> VerifierOutcome:
    """For every pair (T, S) with T c_1-continuous and (S, T) a Geraghty
    pair on a c_1-connected carrier, S must be constant."""
    _require_binding(image, space)
    c1 = _c1_view(image)
    if not is_connected(c1):
        return VerifierOutcome(SKIPPED, {"reason": "carrier is not c1-connected"})
    maps_list = list(maps.enumerate_self_maps(image, budget))
    if len(maps_list) ** 2 > budget:
        raise BudgetExceededError(
            f"pair sweep of {len(maps_list) ** 2} exceeds the budget {budget}"
        )
    pairs = 0
    for t_map in maps_list:
        if not maps.is_continuous_adjacency(c1, t_map):
            continue
        for s_map in maps_list:
            if classifiers.is_geraghty_pair(s_map, t_map, space):
                pairs += 1
                if not maps.is_constant(s_map):
                    return VerifierOutcome(
                        FAILED,
                        {"S": emit_map(s_map), "T": emit_map(t_map)},
                    )
    return VerifierOutcome(CONFIRMED, {"qualifying_pairs": pairs})


def verify_krishna_special_case(
    image: DigitalImage,
    space: MetricSpace,
    budget: int = maps.DEFAULT_ENUM_BUDGET,
) -> VerifierOutcome:
    """Commuting Geraghty pairs with continuous T on a c_1-connected
    carrier: S is constant at some x0 and T(x0) = x0, so a common fixed
    point exists."""
    _require_binding(image, space)
    c1 = _c1_view(image)
    if not is_connected(c1):
        return VerifierOutcome(SKIPPED, {"reason": "carrier is not c1-connected"})
    maps_list = list(maps.enumerate_self_maps(image, budget))
    if len(maps_list) ** 2 > budget:
        raise BudgetExceededError(
            f"pair sweep of {len(maps_list) ** 2} exceeds the budget {budget}"
        )
    n = len(image)
    pairs = 0
    for t_map in maps_list:
        if not maps.is_continuous_adjacency(c1, t_map):
            continue
        ti = t_map.idx
        for s_map in maps_list:
            si = s_map.idx
            if any(si[ti[i]] != ti[si[i]] for i in range(n)):
                continue
            if not classifiers.is_geraghty_pair(s_map, t_map, space):
                continue
            pairs += 1
            if not maps.is_constant(s_map):
                return VerifierOutcome(FAILED, {"S_not_constant": emit_map(s_map)})
            x0 = s_map.values[0]
            if t_map(x0) != x0:
                return VerifierOutcome(
                    FAILED,
                    {"S": emit_map(s_map), "T": emit_map(t_map), "x0": list(x0)},
                )
    return VerifierOutcome(CONFIRMED, {"qualifying_pairs": pairs})


def verify_wus_collapse(
    image: DigitalImage,
    space: MetricSpace,
    budget: int = maps.DEFAULT_ENUM_BUDGET,
) -> VerifierOutcome:
    """The literal epsilon-delta checker, the strict-decrease checker and
    the modulus bound classify every self-map identically."""
    _require_binding(image, space)
    checked = 0
    wus_count = 0
    max_modulus: Fraction | float = Fraction(0)
    for f in maps.enumerate_self_maps(image, budget):
        checked += 1
        w = classifiers.is_wus_contraction(f, space)
        g = classifiers.is_geraghty(f, space).holds
        verdict = classifiers.contraction_modulus(f, space)
        if not (w == g == verdict.is_contraction):
            return VerifierOutcome(
                FAILED,
                {
                    "map": emit_map(f),
                    "wus": w,
                    "strict_decrease": g,
                    "modulus": scalar_to_json(verdict.modulus),
                },
            )
        if w:
            wus_count += 1
            if verdict.modulus > max_modulus:
                max_modulus = verdict.modulus
    return VerifierOutcome(
        CONFIRMED,
        {
            "maps_checked": checked,
            "wus_maps": wus_count,
            "max_wus_modulus": scalar_to_json(max_modulus),
        },
    )


def verify_kandt(
    image: DigitalImage,
    space: MetricSpace,
    budget: int = maps.DEFAULT_ENUM_BUDGET,
) -> VerifierOutcome:
    """Every strict-pairwise-decrease self-map reaches a unique fixed
    point by iteration from every start, within (number of distinct
    positive distances + 1) steps."""
    _require_binding(image, space)
    table = space.scalars
    n = len(image)
    realized = {table[i][j] for i in range(n) for j in range(i + 1, n)}
    realized.discard(0)
    step_bound = len(realized) + 1
    geraghty_count = 0
    for f in maps.enumerate_self_maps(image, budget):
        if not classifiers.is_geraghty(f, space).holds:
            continue
        geraghty_count += 1
        fps = maps.fixed_points(f)
        if len(fps) != 1:
            return VerifierOutcome(
                FAILED, {"map": emit_map(f), "fixed_points": len(fps)}
            )
        target = next(iter(fps))
        for x0 in image.sorted_points:
            trace = maps.orbit(f, x0, max_steps=step_bound)
            if trace.fixed_point != target:
                return VerifierOutcome(
                    FAILED,
                    {
                        "map": emit_map(f),
                        "start": list(x0),
                        "orbit": [list(p) for p in trace.points],
                    },
                )
    return VerifierOutcome(
        CONFIRMED, {"geraghty_maps": geraghty_count, "step_bound": step_bound}
    )


# ---------------------------------------------------------------------------
# Claims registry


@dataclass(frozen=True)
class Claim:
    """One audited assertion: its source label, expected status, and the
    verifier that re-checks it (executable statuses only)."""

    id: str
    source: str
    summary: str
    expected_status: str
    verifier: str | None = None
    notes: str = ""

    def __post_init__(self) -> None:
        if self.expected_status in EXECUTABLE_STATUSES:
            if not self.verifier:
                raise ValueError(
                    f"claim {self.id}: status {self.expected_status} needs a verifier"
                )
        elif self.expected_status in REGISTRY_ONLY_STATUSES:
            if self.verifier:
                raise ValueError(
                    f"claim {self.id}: status {self.expected_status} must not name a verifier"
                )
        else:
            raise ValueError(
                f"claim {self.id}: unknown status {self.expected_status!r}"
            )


def _sweep_spaces(names: tuple[str, ...]) -> list[tuple[str, MetricSpace]]:
    out = []
    for name in names:
        image = catalog_image(name)
        for spec in metrics_for(image):
            out.append((f"{name}/{spec.label()}", MetricSpace(image, spec)))
    return out


_C1_CONNECTED = ("path2", "path3", "path4", "square")
_ALL_IMAGES = CATALOG_ORDER


def _merge_sweeps(
    runs: list[tuple[str, VerifierOutcome]]
) -> VerifierOutcome:
    failed = [(name, o.witness) for name, o in runs if o.verdict == FAILED]
    if failed:
        return VerifierOutcome(FAILED, {"failed": dict(failed)})
    return VerifierOutcome(
        CONFIRMED, {name: o.witness for name, o in runs if o.verdict == CONFIRMED}
    )


def _run_geraghty_triviality_catalog() -> VerifierOutcome:
    runs = [
        (name, verify_geraghty_triviality(space.image, space))
        for name, space in _sweep_spaces(_C1_CONNECTED)
    ]
    return _merge_sweeps(runs)


def _run_gconst_catalog() -> VerifierOutcome:
    runs = [
        (name, verify_gconst(space.image, space))
        for name, space in _sweep_spaces(_C1_CONNECTED)
    ]
    return _merge_sweeps(runs)


def _run_krishna_catalog() -> VerifierOutcome:
    runs = [
        (name, verify_krishna_special_case(space.image, space))
        for name, space in _sweep_spaces(_C1_CONNECTED)
    ]
    return _merge_sweeps(runs)


def _run_wus_collapse_catalog() -> VerifierOutcome:
    runs = [
        (name, verify_wus_collapse(space.image, space))
        for name, space in _sweep_spaces(_ALL_IMAGES)
    ]
    return _merge_sweeps(runs)


def _run_kandt_catalog() -> VerifierOutcome:
    runs = [
        (name, verify_kandt(space.image, space))
        for name, space in _sweep_spaces(_ALL_IMAGES)
    ]
    return _merge_sweeps(runs)


def _run_jainr_sweep(check: Callable) -> VerifierOutcome:
    total = 0
    for name in ("path2", "split", "path3", "path4"):
        image = catalog_image(name)
        space = MetricSpace(image, MetricSpec.l1())
        for pair in compatibility.map_pairs(image):
            if not compatibility.is_compatible_type_r(pair, space):
                continue
            total += 1
            verdict = check(pair, space)
            if verdict.status != "success":
                return VerifierOutcome(
                    FAILED,
                    {
                        "image": name,
                        "f": emit_map(pair.f),
                        "g": emit_map(pair.g),
                        "status": verdict.status,
                    },
                )
    return VerifierOutcome(CONFIRMED, {"type_r_pairs": total})


VERIFIER_TABLE: dict[str, Callable[[], VerifierOutcome]] = {
    "shukla31_refutation": verify_shukla31_refutation,
    "jk_remark32_refutation": verify_jk_remark32_refutation,
    "jk34_35_refutation": verify_jk34_35_refutation,
    "nonconverge_example": verify_nonconverge_example,
    "psi_trivialities": verify_psi_trivialities,
    "geraghty_triviality_catalog": _run_geraghty_triviality_catalog,
    "gconst_catalog": _run_gconst_catalog,
    "krishna_commuting_catalog": _run_krishna_catalog,
    "wus_collapse_catalog": _run_wus_collapse_catalog,
    "kandt_catalog": _run_kandt_catalog,
    "jainr32_sweep": lambda: _run_jainr_sweep(compatibility.check_jainr32),
    "jainr33_sweep": lambda: _run_jainr_sweep(compatibility.check_jainr33),
}


@lru_cache(maxsize=1)
def load_claims() -> tuple[Claim, ...]:
    """The shipped registry, in file order."""
    raw = json.loads(
        resources.files("digitop").joinpath("data/claims.json").read_text("utf-8")
    )
    claims = tuple(
        Claim(
            id=entry["id"],
            source=entry["source"],
            summary=entry["summary"],
            expected_status=entry["expected_status"],
            verifier=entry.get("verifier"),
            notes=entry.get("notes", ""),
        )
        for entry in raw
    )
    ids = [c.id for c in claims]
    if len(set(ids)) != len(ids):
        raise InputError("claims registry has duplicate ids")
    for claim in claims:
        if claim.verifier is not None and claim.verifier not in VERIFIER_TABLE:
            raise InputError(f"claim {claim.id}: unknown verifier {claim.verifier!r}")
    return claims


@dataclass
class ClaimResult:
    claim_id: str
    expected_status: str
    machine_verdict: str
    witness: Any
    elapsed_s: float


@dataclass
class AuditReport:
    results: list[ClaimResult]
    summary: dict[str, int]
    ok: bool


def _matched(claim: Claim, verdict: str) -> bool:
    if claim.expected_status in REGISTRY_ONLY_STATUSES:
        return verdict == SKIPPED
    return verdict == CONFIRMED


def run_registry(claim_ids: list[str] | None = None) -> AuditReport:
    """Execute every selected claim's verifier and compare against the
    expected status.  Registry-only entries are SKIPPED by design."""
    claims = load_claims()
    if claim_ids is not None:
        known = {c.id for c in claims}
        unknown = [cid for cid in claim_ids if cid not in known]
        if unknown:
            raise UnknownClaimError(f"unknown claim id(s): {', '.join(unknown)}")
        wanted = set(claim_ids)
        claims = tuple(c for c in claims if c.id in wanted)
    results: list[ClaimResult] = []
    mismatched = 0
    counts = {CONFIRMED: 0, FAILED: 0, SKIPPED: 0}
    for claim in claims:
        start = time.perf_counter()
        if claim.verifier is None:
            outcome = VerifierOutcome(SKIPPED, None)
        else:
            outcome = VERIFIER_TABLE[claim.verifier]()
        elapsed = time.perf_counter() - start
        counts[outcome.verdict] = counts.get(outcome.verdict, 0) + 1
        if not _matched(claim, outcome.verdict):
            mismatched += 1
        results.append(
            ClaimResult(
                claim_id=claim.id,
                expected_status=claim.expected_status,
                machine_verdict=outcome.verdict,
                witness=outcome.witness,
                elapsed_s=elapsed,
            )
        )
    summary = {
        "claims": len(results),
        "confirmed": counts[CONFIRMED],
        "failed": counts[FAILED],
        "skipped": counts[SKIPPED],
        "mismatched": mismatched,
    }
    return AuditReport(results=results, summary=summary, ok=mismatched == 0)


def report_to_dict(report: AuditReport, include_timing: bool = True) -> dict:
    return {
        "results": [
            {
                "claim": r.claim_id,
                "expected_status": r.expected_status,
                "machine_verdict": r.machine_verdict,
                "witness": r.witness,
                "elapsed_s": r.elapsed_s if include_timing else 0.0,
            }
            for r in report.results
        ],
        "summary": report.summary,
        "ok": report.ok,
    }


def report_from_dict(raw: dict) -> AuditReport:
    results = [
        ClaimResult(
            claim_id=entry["claim"],
            expected_status=entry["expected_status"],
            machine_verdict=entry["machine_verdict"],
            witness=entry["witness"],
            elapsed_s=entry["elapsed_s"],
        )
        for entry in raw["results"]
    ]
    return AuditReport(results=results, summary=raw["summary"], ok=raw["ok"])


def report_to_json(report: AuditReport, include_timing: bool = True) -> str:
    return json.dumps(
        report_to_dict(report, include_timing),
        indent=2,
        sort_keys=True,
    )


def report_to_markdown(report: AuditReport, include_timing: bool = True) -> str:
    lines = [
        "# Audit report",
        "",
        "| claim | expected | verdict | elapsed (s) |",
        "|---|---|---|---|",
    ]
    for r in report.results:
        elapsed = f"{r.elapsed_s:.3f}" if include_timing else "-"
        lines.append(
            f"| {r.claim_id} | {r.expected_status} | {r.machine_verdict} | {elapsed} |"
        )
    s = report.summary
    lines.append("")
    lines.append(
        f"{s['claims']} claims: {s['confirmed']} confirmed, "
        f"{s['skipped']} skipped, {s['failed']} failed, "
        f"{s['mismatched']} mismatched."
    )
    lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Generic brute-force falsifier


@dataclass(frozen=True)
class SchemaPredicate:
    arity: int
    consts: tuple[str, ...]
    fn: Callable[[MetricSpace, tuple[SelfMap, ...], dict[str, Fraction]], bool]


def _p_s_continuous(space, ms, _):
    return maps.is_continuous_adjacency(space.image, ms[0])


def _p_t_continuous(space, ms, _):
    return maps.is_continuous_adjacency(space.image, ms[1])


def _p_shukla31_bound(space, ms, consts):
    s, t = ms[0], ms[1]
    alpha = consts["alpha"]
    table = space.scalars
    si, ti = s.idx, t.idx
    n = len(space.image)
    for i in range(n):
        for j in range(n):
            if not le(table[si[i]][ti[j]], alpha * table[i][si[i]] + table[j][ti[j]]):
                return False
    return True


def _p_common_fixed_point(space, ms, _):
    return bool(maps.fixed_points(ms[0]) & maps.fixed_points(ms[1]))


PREDICATES: dict[str, SchemaPredicate] = {
    "true": SchemaPredicate(1, (), lambda space, ms, c: True),
    "false": SchemaPredicate(1, (), lambda space, ms, c: False),
    "s_continuous": SchemaPredicate(1, (), _p_s_continuous),
    "s_geraghty": SchemaPredicate(
        1, (), lambda space, ms, c: classifiers.is_geraghty(ms[0], space).holds
    ),
    "s_wus": SchemaPredicate(
        1, (), lambda space, ms, c: classifiers.is_wus_contraction(ms[0], space)
    ),
    "s_contraction": SchemaPredicate(
        1,
        (),
        lambda space, ms, c: classifiers.contraction_modulus(ms[0], space).is_contraction,
    ),
    "s_expansive": SchemaPredicate(
        1, (), lambda space, ms, c: classifiers.is_expansive(ms[0], space)
    ),
    "s_constant": SchemaPredicate(1, (), lambda space, ms, c: maps.is_constant(ms[0])),
    "s_has_fixed_point": SchemaPredicate(
        1, (), lambda space, ms, c: bool(maps.fixed_points(ms[0]))
    ),
    "t_continuous": SchemaPredicate(2, (), _p_t_continuous),
    "t_constant": SchemaPredicate(2, (), lambda space, ms, c: maps.is_constant(ms[1])),
    "geraghty_pair": SchemaPredicate(
        2, (), lambda space, ms, c: classifiers.is_geraghty_pair(ms[0], ms[1], space)
    ),
    "commuting": SchemaPredicate(
        2,
        (),
        lambda space, ms, c: maps.compose(ms[0], ms[1]) == maps.compose(ms[1], ms[0]),
    ),
    "compatible": SchemaPredicate(
        2,
        (),
        lambda space, ms, c: compatibility.is_compatible(
            compatibility.MapPair(ms[0], ms[1]), space
        ),
    ),
    "compatible_k": SchemaPredicate(
        2,
        (),
        lambda space, ms, c: compatibility.is_compatible_type_k(
            compatibility.MapPair(ms[0], ms[1]), space
        ),
    ),
    "compatible_r": SchemaPredicate(
        2,
        (),
        lambda space, ms, c: compatibility.is_compatible_type_r(
            compatibility.MapPair(ms[0], ms[1]), space
        ),
    ),
    "chauhan_compatible": SchemaPredicate(
        2,
        (),
        lambda space, ms, c: compatibility.is_pointwise_compatible_chauhan(
            compatibility.MapPair(ms[0], ms[1]), space
        ),
    ),
    "shukla31_bound": SchemaPredicate(2, ("alpha",), _p_shukla31_bound),
    "common_fixed_point": SchemaPredicate(2, (), _p_common_fixed_point),
}


@dataclass(frozen=True)
class AssertionSchema:
    """Search-space declaration for the falsifier: hypothesis predicates
    (evaluated in order, short-circuit), a conclusion predicate, catalog
    images, a metric, and constant grids."""

    name: str
    arity: int
    images: tuple[str, ...]
    metric: MetricSpec
    hypotheses: tuple[str, ...]
    conclusion: str
    constants: tuple[tuple[str, tuple[Fraction, ...]], ...] = ()

    def __post_init__(self) -> None:
        if self.arity not in (1, 2):
            raise ValueError("schema arity must be 1 or 2")
        if not self.images:
            raise ValueError("schema needs at least one image")
        declared = {name for name, _ in self.constants}
        for pred in (*self.hypotheses, self.conclusion):
            spec = PREDICATES.get(pred)
            if spec is None:
                raise ValueError(f"unknown predicate: {pred!r}")
            if spec.arity > self.arity:
                raise ValueError(
                    f"predicate {pred!r} needs arity {spec.arity}, schema has {self.arity}"
                )
            missing = [c for c in spec.consts if c not in declared]
            if missing:
                raise ValueError(
                    f"predicate {pred!r} needs constants {missing} in the schema"
                )


def parse_schema(raw: dict) -> AssertionSchema:
    try:
        constants = tuple(
            (name, tuple(parse_rational(v) for v in grid))
            for name, grid in raw.get("constants", {}).items()
        )
        return AssertionSchema(
            name=raw["name"],
            arity=raw["arity"],
            images=tuple(raw["images"]),
            metric=parse_metric(raw["metric"]),
            hypotheses=tuple(raw["hypotheses"]),
            conclusion=raw["conclusion"],
            constants=constants,
        )
    except KeyError as exc:
        raise InputError(f"schema is missing {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


@dataclass(frozen=True)
class FalsifyResult:
    """First witness violating (hypotheses and not conclusion), or
    exhaustion with the number of candidates in the space."""

    witness: dict | None
    checked: int

    @property
    def exhausted(self) -> bool:
        return self.witness is None


def _image_scan_order(names: tuple[str, ...]) -> list[str]:
    order = {name: i for i, name in enumerate(CATALOG_ORDER)}
    for name in names:
        if name not in order:
            raise InputError(f"unknown catalog image in schema: {name!r}")
    return sorted(names, key=lambda n: (len(catalog_image(n)), n))


def _const_combos(schema: AssertionSchema) -> list[dict[str, Fraction]]:
    if not schema.constants:
        return [{}]
    names = [name for name, _ in schema.constants]
    grids = [grid for _, grid in schema.constants]
    return [dict(zip(names, combo)) for combo in itertools.product(*grids)]


def falsify(
    schema: AssertionSchema,
    budget: int = maps.DEFAULT_ENUM_BUDGET,
    parallelism: int = 1,
) -> FalsifyResult:
    """Deterministic scan for a counterexample to the schema.

    Candidates are ordered by image (smallest first), then map tuple in
    enumeration order, then constant combination; hypothesis predicates
    are evaluated in declared order with short-circuit.  The first
    witness in scan order is returned (no minimality search); with
    ``parallelism`` > 1 the per-image map range is partitioned and the
    witness of least global index wins, so the result is unchanged.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    names = _image_scan_order(schema.images)
    combos = _const_combos(schema)
    total = 0
    for name in names:
        n = len(catalog_image(name))
        total += (n**n) ** schema.arity * len(combos)
    if total > budget:
        raise BudgetExceededError(
            f"search space of {total} candidates exceeds the budget {budget}"
        )
    hyps = [PREDICATES[h].fn for h in schema.hypotheses]
    concl = PREDICATES[schema.conclusion].fn

    offset = 0
    for name in names:
        image = catalog_image(name)
        try:
            space = MetricSpace(image, schema.metric)
        except ValueError as exc:
            raise InputError(f"schema metric invalid on {name!r}: {exc}") from exc
        maps_list = list(maps.enumerate_self_maps(image, budget))
        per_f = (len(maps_list) if schema.arity == 2 else 1) * len(combos)

        def scan_f_range(lo: int, hi: int) -> tuple[int, dict] | None:
            for fi in range(lo, hi):
                f = maps_list[fi]
                seconds = maps_list if schema.arity == 2 else [None]
                for gi, g in enumerate(seconds):
                    ms = (f,) if g is None else (f, g)
                    for ci, consts in enumerate(combos):
                        if all(h(space, ms, consts) for h in hyps) and not concl(
                            space, ms, consts
                        ):
                            idx = offset + fi * per_f + gi * len(combos) + ci
                            witness = {
                                "schema": schema.name,
                                "image": name,
                                "maps": [emit_map(m) for m in ms],
                                "constants": {
                                    k: str(v) for k, v in consts.items()
                                },
                                "index": idx,
                            }
                            return idx, witness
            return None

        if parallelism == 1:
            hit = scan_f_range(0, len(maps_list))
            hits = [hit] if hit else []
        else:
            chunk = max(1, -(-len(maps_list) // parallelism))
            ranges = [
                (lo, min(lo + chunk, len(maps_list)))
                for lo in range(0, len(maps_list), chunk)
            ]
            with ThreadPoolExecutor(max_workers=parallelism) as pool:
                found = pool.map(lambda r: scan_f_range(*r), ranges)
            hits = [h for h in found if h is not None]
        if hits:
            idx, witness = min(hits, key=lambda h: h[0])
            return FalsifyResult(witness, idx + 1)
        offset += len(maps_list) * per_f
    return FalsifyResult(None, total)
