"""Built-in image catalog for sweeps and falsification runs.

Small enough for |X|^|X| and |X|^(2|X|) enumeration, rich enough to
exercise c_1 against c_2 and connected against disconnected carriers:
paths of 2-4 points in Z, the four-point diamond in Z^2 (a c_2 simple
closed curve), a 2x2 square in Z^2, and a disconnected two-point set.
"""

from __future__ import annotations

from functools import lru_cache

from .lattice import DigitalImage, is_connected
from .metrics import MetricSpec, MetricSpace


@lru_cache(maxsize=None)
def build_catalog() -> dict[str, DigitalImage]:
    return {
        "path2": DigitalImage.of([(0,), (1,)], u=1),
        "path3": DigitalImage.of([(0,), (1,), (2,)], u=1),
        "path4": DigitalImage.of([(0,), (1,), (2,), (3,)], u=1),
        "diamond": DigitalImage.of([(1, 0), (0, 1), (-1, 0), (0, -1)], u=2),
        "square": DigitalImage.of([(0, 0), (0, 1), (1, 0), (1, 1)], u=1),
        "split": DigitalImage.of([(0, 0), (5, 5)], u=1),
    }


#: Catalog names in deterministic scan order: by size, then by name.
CATALOG_ORDER: tuple[str, ...] = (
    "path2",
    "split",
    "path3",
    "diamond",
    "path4",
    "square",
)


def catalog_image(name: str) -> DigitalImage:
    try:
        return build_catalog()[name]
    except KeyError:
        raise ValueError(f"unknown catalog image: {name!r}") from None


def metrics_for(image: DigitalImage) -> tuple[MetricSpec, ...]:
    """The l_p metrics, plus shortest-path when the image is connected."""
    specs = [MetricSpec.l1(), MetricSpec.l2(), MetricSpec.linf()]
    if is_connected(image):
        specs.append(MetricSpec.shortest_path())
    return tuple(specs)


def catalog_spaces() -> list[tuple[str, MetricSpace]]:
    """Every catalog image bound to every applicable metric."""
    out = []
    for name in CATALOG_ORDER:
        image = catalog_image(name)
        for spec in metrics_for(image):
            out.append((f"{name}/{spec.label()}", MetricSpace(image, spec)))
    return out
