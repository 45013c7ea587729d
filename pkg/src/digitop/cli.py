"""Command-line front end: validation, individual checks, registry runs
and falsification jobs.

Exit codes: 0 for success (or a true verdict / a found witness), 1 for a
false verdict, a failed audit or an exhausted search, 2 for input
errors.  The env var DIGITOP_BUDGET overrides the default enumeration
budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import auditor, classifiers, compatibility, fileio, maps
from .errors import BudgetExceededError, InputError, UnknownClaimError
from .lattice import DigitalImage, is_connected
from .maps import DEFAULT_ENUM_BUDGET, SelfMap
from .metrics import TAU, MetricSpace, MetricSpec, lt

CHECK_KINDS = (
    "continuity",
    "contraction",
    "geraghty",
    "wus",
    "expansive",
    "compatible",
    "compatible-k",
    "compatible-r",
    "chauhan",
)

PAIR_KINDS = {"compatible", "compatible-k", "compatible-r", "chauhan"}


@dataclass
class RunConfig:
    """Resolved invocation parameters shared by the command handlers."""

    command: str
    inputs: tuple[str, ...] = ()
    claim_filter: tuple[str, ...] | None = None
    out: str | None = None
    fmt: str = "json"
    parallelism: int = 1
    budget: int = DEFAULT_ENUM_BUDGET
    tau: float = TAU

    def __post_init__(self) -> None:
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.fmt not in ("json", "md"):
            raise ValueError(f"unknown format {self.fmt!r}")


def _default_budget() -> int:
    raw = os.environ.get("DIGITOP_BUDGET")
    if raw is None:
        return DEFAULT_ENUM_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"DIGITOP_BUDGET must be an integer, got {raw!r}") from None


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _bind_space(image: DigitalImage, metric: MetricSpec | None) -> MetricSpace:
    # Checks that need a metric default to Euclidean when the image file
    # carries no metric fragment.
    return MetricSpace(image, metric if metric is not None else MetricSpec.l2())


def cmd_validate(config: RunConfig) -> int:
    image, metric = fileio.load_image(config.inputs[0])
    if metric is not None:
        _bind_space(image, metric)  # validates shortest-path connectivity
    connected = "connected" if is_connected(image) else "disconnected"
    print(f"OK: {len(image)} points, c_{image.adjacency.u}, {connected}")
    return 0


def _fmt_point(p) -> str:
    return "(" + ", ".join(str(c) for c in p) + ")"


def _single_map_verdict(
    kind: str,
    image: DigitalImage,
    space: MetricSpace,
    f: SelfMap,
    tau: float,
) -> tuple[bool, str | None, str | None]:
    """Returns (verdict, witness text, extra info line)."""
    if kind == "continuity":
        bad = maps.first_discontinuity(image, f)
        if bad is None:
            return True, None, None
        return False, f"{_fmt_point(bad[0])} {_fmt_point(bad[1])}", None
    if kind == "contraction":
        verdict = classifiers.contraction_modulus(f, space, tau)
        info = f"modulus: {fileio.scalar_to_json(verdict.modulus)}"
        return verdict.is_contraction, None, info
    if kind == "geraghty":
        verdict = classifiers.is_geraghty(f, space, tau)
        if verdict.holds:
            return True, None, f"modulus: {fileio.scalar_to_json(verdict.modulus)}"
        x, y = verdict.failing_pair
        return False, f"{_fmt_point(x)} {_fmt_point(y)}", None
    if kind == "wus":
        ok = classifiers.is_wus_contraction(f, space, tau)
        if ok:
            return True, None, None
        # A pair whose own distance is the failing epsilon.
        table = space.scalars
        fi = f.idx
        pts = space.image.sorted_points
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if table[i][j] != 0 and not lt(table[fi[i]][fi[j]], table[i][j], tau):
                    return False, f"{_fmt_point(pts[i])} {_fmt_point(pts[j])}", None
        return False, None, None
    raise InputError(f"unknown check kind: {kind!r}")


def _pair_verdict(
    kind: str,
    space: MetricSpace,
    f: SelfMap,
    g: SelfMap,
    tau: float,
) -> tuple[bool, str | None]:
    pair = compatibility.MapPair(f, g)
    if kind == "chauhan":
        ok = compatibility.is_pointwise_compatible_chauhan(pair, space, tau)
        if ok:
            return True, None
        for x in space.image.sorted_points:
            lhs = space.d(f(g(x)), g(f(x)))
            rhs = space.d(f(x), g(x))
            if not float(lhs) <= float(rhs) + tau:
                return False, _fmt_point(x)
        return False, None
    checker = {
        "compatible": compatibility.is_compatible,
        "compatible-k": compatibility.is_compatible_type_k,
        "compatible-r": compatibility.is_compatible_type_r,
    }[kind]
    if checker(pair, space):
        return True, None
    for x in sorted(compatibility.coincidence_points(pair).points):
        # Recheck pointwise to name the first failing coincidence point.
        fx, gx = f(x), g(x)
        if kind == "compatible" and f(gx) != g(fx):
            return False, _fmt_point(x)
        if kind == "compatible-k" and (f(fx) != g(fx) or g(gx) != f(fx)):
            return False, _fmt_point(x)
        if kind == "compatible-r" and (f(gx) != g(fx) or f(fx) != g(gx)):
            return False, _fmt_point(x)
    return False, None


def cmd_check(args, config: RunConfig) -> int:
    image, metric = fileio.load_image(args.image)
    space = _bind_space(image, metric)
    f = fileio.load_map(args.map, image)
    kind = args.kind
    if kind in PAIR_KINDS:
        if args.map2 is None:
            raise InputError(f"check {kind} needs --map2")
        g = fileio.load_map(args.map2, image)
        ok, witness = _pair_verdict(kind, space, f, g, config.tau)
        info = None
    elif kind == "expansive" and (args.weights or args.fn):
        if not (args.weights and args.fn):
            raise InputError("the weighted expansive check needs both --weights and --fn")
        alpha = fileio.load_weights(args.weights, image)
        psi = fileio.load_closed_form(args.fn)
        verdict = classifiers.is_alpha_psi_expansive(f, alpha, psi, space, config.tau)
        ok = verdict.holds
        witness = (
            None
            if verdict.failing_pair is None
            else f"{_fmt_point(verdict.failing_pair[0])} {_fmt_point(verdict.failing_pair[1])}"
        )
        info = None
    elif kind == "expansive":
        ok = classifiers.is_expansive(f, space, config.tau)
        witness = None
        if not ok:
            pts = image.sorted_points
            table = space.scalars
            fi = f.idx
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    if lt(table[fi[i]][fi[j]], table[i][j], config.tau):
                        witness = f"{_fmt_point(pts[i])} {_fmt_point(pts[j])}"
                        break
                if witness:
                    break
        info = None
    else:
        ok, witness, info = _single_map_verdict(kind, image, space, f, config.tau)
    print(f"{kind}: {'true' if ok else 'false'}")
    if info:
        print(info)
    if not ok and witness:
        print(f"witness: {witness}")
    return 0 if ok else 1


def cmd_audit(args, config: RunConfig) -> int:
    claim_filter = list(config.claim_filter) if config.claim_filter else None
    report = auditor.run_registry(claim_filter)
    for r in report.results:
        print(
            f"{r.claim_id}: expected {r.expected_status}, "
            f"verdict {r.machine_verdict} ({r.elapsed_s:.3f}s)"
        )
    s = report.summary
    print(
        f"summary: {s['claims']} claims, {s['confirmed']} confirmed, "
        f"{s['skipped']} skipped, {s['failed']} failed, {s['mismatched']} mismatched"
    )
    if config.out:
        if config.fmt == "json":
            payload = auditor.report_to_json(report)
        else:
            payload = auditor.report_to_markdown(report)
        Path(config.out).write_text(payload, encoding="utf-8")
        print(f"report written to {config.out}")
    return 0 if report.ok else 1


def cmd_falsify(args, config: RunConfig) -> int:
    raw = fileio.load_json(args.schema)
    schema = auditor.parse_schema(raw)
    result = auditor.falsify(schema, budget=config.budget, parallelism=config.parallelism)
    if result.witness is not None:
        print(json.dumps(result.witness, indent=2, sort_keys=True))
        return 0
    print(f"exhausted: {result.checked} candidates checked")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="digitop",
        description="Decidable checks and an executable audit registry "
        "for fixed-point claims on finite digital images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="parse an image file and check its invariants")
    p_validate.add_argument("image", help="image JSON file")

    p_check = sub.add_parser("check", help="run one classifier against map files")
    p_check.add_argument("kind", choices=CHECK_KINDS)
    p_check.add_argument("--image", required=True, help="image JSON file")
    p_check.add_argument("--map", required=True, help="map JSON file")
    p_check.add_argument("--map2", help="second map JSON file (pair checks)")
    p_check.add_argument("--weights", help="weight table JSON file")
    p_check.add_argument("--fn", help="closed-form function JSON file")
    p_check.add_argument("--tau", type=float, default=TAU)

    p_audit = sub.add_parser("audit", help="registry operations")
    audit_sub = p_audit.add_subparsers(dest="audit_command", required=True)
    p_run = audit_sub.add_parser("run", help="run the claims registry")
    p_run.add_argument("--claim", action="append", default=None, help="claim id filter")
    p_run.add_argument("--out", help="write the report to this path")
    p_run.add_argument("--format", choices=("json", "md"), default="json")

    p_falsify = sub.add_parser("falsify", help="brute-force search for a counterexample")
    p_falsify.add_argument("--schema", required=True, help="schema JSON file")
    p_falsify.add_argument("--budget", type=int, default=None)
    p_falsify.add_argument("--parallel", type=int, default=1)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            config = RunConfig("validate", inputs=(args.image,))
            return cmd_validate(config)
        if args.command == "check":
            config = RunConfig("check", tau=args.tau)
            return cmd_check(args, config)
        if args.command == "audit":
            config = RunConfig(
                "audit",
                claim_filter=tuple(args.claim) if args.claim else None,
                out=args.out,
                fmt=args.format,
            )
            return cmd_audit(args, config)
        if args.command == "falsify":
            budget = args.budget if args.budget is not None else _default_budget()
            config = RunConfig(
                "falsify", budget=budget, parallelism=args.parallel
            )
            return cmd_falsify(args, config)
        return _fail(f"unknown command {args.command!r}")
    except (InputError, UnknownClaimError, BudgetExceededError, ValueError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
