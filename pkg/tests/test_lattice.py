import pytest
from hypothesis import given
from hypothesis import strategies as st

from digitop.lattice import (
    AdjacencySpec,
    DigitalImage,
    connected_components,
    cu_adjacent,
    is_connected,
    is_connected_subset,
    neighbors,
)

from strategies import images, points


def test_adjacent_one_step_c1():
    assert cu_adjacent((0, 0), (1, 0), u=1)


def test_not_adjacent_two_steps_c1():
    assert not cu_adjacent((0, 0), (1, 1), u=1)


def test_diamond_consecutive_points_adjacent_c2():
    assert cu_adjacent((1, 0), (0, 1), u=2)


def test_not_adjacent_gap_of_two():
    assert not cu_adjacent((1, 0), (-1, 0), u=2)


def test_adjacent_rejects_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        cu_adjacent((0, 0), (1,), u=1)


def test_adjacent_rejects_u_out_of_range():
    with pytest.raises(ValueError, match="u out of range"):
        cu_adjacent((0, 0), (1, 0), u=3)
    with pytest.raises(ValueError, match="u out of range"):
        cu_adjacent((0, 0), (1, 0), u=0)


@given(points(3), points(3), st.integers(1, 3))
def test_adjacency_symmetric_and_irreflexive(x, y, u):
    assert cu_adjacent(x, y, u) == cu_adjacent(y, x, u)
    assert not cu_adjacent(x, x, u)


@given(points(3), points(3), st.integers(1, 3), st.integers(1, 3))
def test_adjacency_monotone_in_u(x, y, u, v):
    lo, hi = min(u, v), max(u, v)
    if cu_adjacent(x, y, lo):
        assert cu_adjacent(x, y, hi)


@given(points(3), points(3))
def test_no_adjacency_past_unit_box(x, y):
    if max(abs(a - b) for a, b in zip(x, y)) > 1:
        assert not cu_adjacent(x, y, u=3)


def test_image_construction_validates():
    with pytest.raises(ValueError, match="at least one point"):
        DigitalImage(1, frozenset(), AdjacencySpec(1))
    with pytest.raises(ValueError, match="dimension"):
        DigitalImage.of([(0, 0), (1,)], u=1, dimension=2)
    with pytest.raises(ValueError, match="exceeds"):
        DigitalImage.of([(0,), (1,)], u=2)


def test_neighbors_on_diamond_matches_pairwise_oracle(diamond):
    # Oracle: apply the adjacency predicate to every other point.
    for x in diamond.sorted_points:
        expected = {
            y for y in diamond.sorted_points if y != x and cu_adjacent(x, y, 2)
        }
        assert neighbors(diamond, x) == expected
    assert neighbors(diamond, (1, 0)) == {(0, 1), (0, -1)}


def test_neighbors_singleton_and_path():
    single = DigitalImage.of([(7,)], u=1)
    assert neighbors(single, (7,)) == frozenset()
    path = DigitalImage.of([(0,), (1,), (2,)], u=1)
    assert neighbors(path, (1,)) == {(0,), (2,)}


def test_neighbors_rejects_outside_point(diamond):
    with pytest.raises(ValueError, match="not in the image"):
        neighbors(diamond, (5, 5))


def test_connectivity_examples(diamond, split):
    assert is_connected(diamond)
    assert is_connected(DigitalImage.of([(3,)], u=1))
    assert not is_connected(split)


def test_connected_subsets_on_diamond(diamond):
    assert is_connected_subset(diamond, {(1, 0), (0, 1)})
    assert not is_connected_subset(diamond, {(1, 0), (-1, 0)})
    assert is_connected_subset(diamond, {(0, 1)})
    assert is_connected_subset(diamond, set())


def test_connected_subset_rejects_strays(diamond):
    with pytest.raises(ValueError, match="not contained"):
        is_connected_subset(diamond, {(1, 0), (9, 9)})


def test_components_examples(diamond, split):
    assert connected_components(diamond) == (frozenset(diamond.points),)
    blocks = connected_components(split)
    assert len(blocks) == 2
    assert all(len(b) == 1 for b in blocks)
    single = DigitalImage.of([(2, 2)], u=1)
    assert connected_components(single) == (frozenset({(2, 2)}),)


@given(images())
def test_components_partition_and_connectivity(image):
    blocks = connected_components(image)
    seen = set()
    for block in blocks:
        assert not (block & seen)
        seen |= block
        assert is_connected_subset(image, block)
    assert seen == image.points
    assert is_connected(image) == (len(blocks) == 1)
