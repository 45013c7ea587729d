"""Hypothesis strategies shared across test modules."""

from hypothesis import strategies as st

from digitop.lattice import DigitalImage


def points(dim: int, span: int = 3):
    coord = st.integers(-span, span)
    return st.tuples(*([coord] * dim))


@st.composite
def images(draw, max_dim: int = 3, max_points: int = 5):
    dim = draw(st.integers(1, max_dim))
    pts = draw(st.sets(points(dim), min_size=1, max_size=max_points))
    u = draw(st.integers(1, dim))
    return DigitalImage.of(sorted(pts), u=u, dimension=dim)
