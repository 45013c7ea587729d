"""digitop: decidable checks on finite digital images and an executable
audit registry for fixed-point claims about digital metric spaces."""

from .lattice import (
    AdjacencySpec,
    DigitalImage,
    Point,
    connected_components,
    cu_adjacent,
    is_connected,
    is_connected_subset,
    neighbors,
)
from .maps import (
    AffineIntMap,
    SelfMap,
    affine_fixed_points,
    compose,
    enumerate_self_maps,
    fixed_points,
    is_constant,
    is_continuous_adjacency,
    is_continuous_subsets,
    orbit,
)
from .metrics import (
    TAU,
    Distance,
    EventuallyPeriodicSequence,
    MetricSpace,
    MetricSpec,
    distance,
    is_cauchy,
    is_eventually_constant,
    min_positive_distance,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacencySpec",
    "AffineIntMap",
    "DigitalImage",
    "Distance",
    "EventuallyPeriodicSequence",
    "MetricSpace",
    "MetricSpec",
    "Point",
    "SelfMap",
    "TAU",
    "affine_fixed_points",
    "compose",
    "connected_components",
    "cu_adjacent",
    "distance",
    "enumerate_self_maps",
    "fixed_points",
    "is_cauchy",
    "is_connected",
    "is_connected_subset",
    "is_constant",
    "is_continuous_adjacency",
    "is_continuous_subsets",
    "is_eventually_constant",
    "min_positive_distance",
    "neighbors",
    "orbit",
    "__version__",
]
