"""JSON file formats: images, maps, weight tables, closed forms.

Rationals travel as "p/q" strings end-to-end so reports never pick up
float drift; l_2 values are emitted as the exact squared distance plus
a display decimal.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

from .classifiers import ClosedFormFn, ConstantFn, LinearFn, PowerFn, StepFn, WeightFunction
from .errors import InputError
from .lattice import AdjacencySpec, DigitalImage, Point
from .maps import SelfMap
from .metrics import INF, Distance, MetricSpec


def parse_rational(value: Any) -> Fraction:
    """Accept "p/q" strings and plain integers."""
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"not a rational: {value!r}")


def emit_rational(value: Fraction) -> str:
    return str(Fraction(value))


def scalar_to_json(value: Fraction | float | int) -> Any:
    """Exact values as "p/q" strings, floats as plain numbers."""
    if isinstance(value, float):
        return value
    return emit_rational(Fraction(value))


def distance_to_json(d: Distance) -> Any:
    if d.is_exact:
        return {"value": emit_rational(Fraction(d.value))}
    return {"sq": d.sq, "display": round(math.sqrt(d.sq), 9)}


def _point(raw: Any) -> Point:
    if not isinstance(raw, list) or not all(isinstance(c, int) for c in raw):
        raise InputError(f"a point must be a list of integers, got {raw!r}")
    return tuple(raw)


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def parse_metric(raw: Any) -> MetricSpec:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise InputError(f"metric spec must be an object with a 'kind': {raw!r}")
    kind = raw["kind"]
    if kind == "lp":
        p = raw.get("p")
        if p in ("inf", "Infinity"):
            p = INF
        if p not in (1, 2, INF):
            raise InputError(f"lp metric needs p in {{1, 2, \"inf\"}}, got {raw.get('p')!r}")
        return MetricSpec("lp", p)
    if kind == "shortest_path":
        return MetricSpec.shortest_path()
    raise InputError(f"unknown metric kind: {kind!r}")


def emit_metric(spec: MetricSpec) -> dict:
    if spec.kind == "shortest_path":
        return {"kind": "shortest_path"}
    return {"kind": "lp", "p": "inf" if spec.p == INF else spec.p}


def parse_image(raw: Any) -> tuple[DigitalImage, MetricSpec | None]:
    """Parse an image spec object; returns the optional bundled metric too.

    Duplicate points are rejected, naming the duplicate.
    """
    if not isinstance(raw, dict):
        raise InputError("image spec must be a JSON object")
    try:
        dim = raw["dim"]
        pts_raw = raw["points"]
        adj_raw = raw["adjacency"]
    except KeyError as exc:
        raise InputError(f"image spec is missing {exc}") from exc
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(pts_raw, list) or not pts_raw:
        raise InputError("points must be a nonempty list")
    points: list[Point] = []
    seen: set[Point] = set()
    for entry in pts_raw:
        p = _point(entry)
        if p in seen:
            raise InputError(f"duplicate point: {list(p)}")
        seen.add(p)
        points.append(p)
    if not isinstance(adj_raw, dict) or adj_raw.get("family") != "cu":
        raise InputError("adjacency must be an object {\"family\": \"cu\", \"u\": ...}")
    u = adj_raw.get("u")
    if not isinstance(u, int):
        raise InputError(f"adjacency u must be an integer, got {u!r}")
    try:
        image = DigitalImage(dim, frozenset(points), AdjacencySpec(u))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    metric = parse_metric(raw["metric"]) if "metric" in raw else None
    return image, metric


def load_image(path: str | Path) -> tuple[DigitalImage, MetricSpec | None]:
    return parse_image(load_json(path))


def emit_image(image: DigitalImage, metric: MetricSpec | None = None) -> dict:
    out: dict = {
        "dim": image.dimension,
        "points": [list(p) for p in image.sorted_points],
        "adjacency": {"family": "cu", "u": image.adjacency.u},
    }
    if metric is not None:
        out["metric"] = emit_metric(metric)
    return out


def parse_map(raw: Any, image: DigitalImage) -> SelfMap:
    """Parse {"map": [[arg, value], ...]}; the table must be total."""
    if not isinstance(raw, dict) or "map" not in raw:
        raise InputError("map spec must be an object with a 'map' list")
    entries = raw["map"]
    if not isinstance(entries, list):
        raise InputError("'map' must be a list of [argument, value] pairs")
    table: dict[Point, Point] = {}
    for entry in entries:
        if not isinstance(entry, list) or len(entry) != 2:
            raise InputError(f"map entry must be [argument, value], got {entry!r}")
        arg, val = _point(entry[0]), _point(entry[1])
        if arg in table:
            raise InputError(f"duplicate map argument: {list(arg)}")
        table[arg] = val
    try:
        return SelfMap.from_table(image, table)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def load_map(path: str | Path, image: DigitalImage) -> SelfMap:
    return parse_map(load_json(path), image)


def emit_map(f: SelfMap) -> dict:
    return {"map": [[list(x), list(v)] for x, v in f.as_table().items()]}


def parse_weights(raw: Any, image: DigitalImage) -> WeightFunction:
    """Parse {"weights": [[x, y, value], ...]}; total over ordered pairs."""
    if not isinstance(raw, dict) or "weights" not in raw:
        raise InputError("weight spec must be an object with a 'weights' list")
    entries = raw["weights"]
    if not isinstance(entries, list):
        raise InputError("'weights' must be a list of [x, y, value] triples")
    table: dict[tuple[Point, Point], Fraction] = {}
    for entry in entries:
        if not isinstance(entry, list) or len(entry) != 3:
            raise InputError(f"weight entry must be [x, y, value], got {entry!r}")
        x, y = _point(entry[0]), _point(entry[1])
        if (x, y) in table:
            raise InputError(f"duplicate weight pair: {list(x)}, {list(y)}")
        table[(x, y)] = parse_rational(entry[2])
    try:
        return WeightFunction.from_dict(image, table)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def load_weights(path: str | Path, image: DigitalImage) -> WeightFunction:
    return parse_weights(load_json(path), image)


def parse_closed_form(raw: Any) -> ClosedFormFn:
    """Parse {"form": "linear", "k": "1/2"} and the other three forms."""
    if not isinstance(raw, dict) or "form" not in raw:
        raise InputError("closed-form spec must be an object with a 'form'")
    form = raw["form"]
    try:
        if form == "linear":
            return LinearFn(parse_rational(raw["k"]))
        if form == "power":
            e = raw["e"]
            if not isinstance(e, int):
                raise InputError(f"power exponent must be an integer, got {e!r}")
            return PowerFn(parse_rational(raw["c"]), e)
        if form == "constant":
            return ConstantFn(parse_rational(raw["c"]))
        if form == "step":
            bps = raw["breakpoints"]
            if not isinstance(bps, list):
                raise InputError("'breakpoints' must be a list of [t, value] pairs")
            parsed = []
            for entry in bps:
                if not isinstance(entry, list) or len(entry) != 2:
                    raise InputError(f"breakpoint must be [t, value], got {entry!r}")
                parsed.append((parse_rational(entry[0]), parse_rational(entry[1])))
            return StepFn(tuple(parsed))
    except KeyError as exc:
        raise InputError(f"closed-form spec is missing {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown closed form: {form!r}")


def load_closed_form(path: str | Path) -> ClosedFormFn:
    return parse_closed_form(load_json(path))
