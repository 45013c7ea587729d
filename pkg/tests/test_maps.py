import pytest
from hypothesis import given
from hypothesis import strategies as st

from digitop.catalog import build_catalog
from digitop.errors import BudgetExceededError
from digitop.lattice import DigitalImage
from digitop.maps import (
    AffineIntMap,
    SelfMap,
    affine_fixed_points,
    compose,
    count_self_maps,
    enumerate_self_maps,
    fixed_points,
    is_constant,
    is_continuous_adjacency,
    is_continuous_subsets,
    orbit,
)


def negation(image):
    return SelfMap(image, tuple(tuple(-c for c in p) for p in image.sorted_points))


def nonconverge_map(n):
    image = DigitalImage.of([(k,) for k in range(n + 1)], u=1)
    table = {(k,): (0,) if k == 1 else (1,) for k in range(n + 1)}
    return image, SelfMap.from_table(image, table)


def test_selfmap_rejects_values_outside_image(path3):
    with pytest.raises(ValueError, match="not a point of the image"):
        SelfMap(path3, ((0,), (1,), (9,)))


def test_selfmap_from_table_requires_totality(path3):
    with pytest.raises(ValueError, match="not total"):
        SelfMap.from_table(path3, {(0,): (0,), (1,): (1,)})
    with pytest.raises(ValueError, match="outside the image"):
        SelfMap.from_table(
            path3, {(0,): (0,), (1,): (1,), (2,): (2,), (7,): (0,)}
        )


def test_identity_and_constant_are_continuous(diamond, path4):
    for image in (diamond, path4):
        assert is_continuous_adjacency(image, SelfMap.identity(image))
        assert is_continuous_subsets(image, SelfMap.identity(image))
        c = image.sorted_points[0]
        assert is_continuous_adjacency(image, SelfMap.constant(image, c))
        assert is_continuous_subsets(image, SelfMap.constant(image, c))


def test_nonconverge_window_map_is_continuous():
    image, s = nonconverge_map(5)
    assert is_continuous_adjacency(image, s)
    assert is_continuous_subsets(image, s)


def test_subset_criterion_counterexample(path3):
    f = SelfMap.from_table(path3, {(0,): (0,), (1,): (2,), (2,): (0,)})
    # The connected subset {0, 1} maps onto {0, 2}, which is not connected.
    assert not is_continuous_subsets(path3, f)
    assert not is_continuous_adjacency(path3, f)


def test_subset_criterion_size_cap():
    image = DigitalImage.of([(k,) for k in range(13)], u=1)
    with pytest.raises(BudgetExceededError):
        is_continuous_subsets(image, SelfMap.identity(image))


def test_continuity_definitions_agree_exhaustively(path3, diamond):
    for image in (path3, diamond):
        for f in enumerate_self_maps(image):
            assert is_continuous_adjacency(image, f) == is_continuous_subsets(image, f)


def test_fixed_points_examples(diamond):
    assert fixed_points(negation(diamond)) == frozenset()
    assert fixed_points(SelfMap.identity(diamond)) == diamond.points
    assert fixed_points(SelfMap.constant(diamond, (0, 1))) == {(0, 1)}


def test_affine_fixed_points():
    assert affine_fixed_points(AffineIntMap(1, 1)).kind == "empty"
    assert affine_fixed_points(AffineIntMap(1, 0)).kind == "all-of-Z"
    constant = affine_fixed_points(AffineIntMap(0, 7))
    assert constant.kind == "singleton" and constant.point == 7
    fp = affine_fixed_points(AffineIntMap(3, 4))
    assert fp.kind == "singleton" and fp.point == -2
    assert AffineIntMap(3, 4)(-2) == -2
    assert affine_fixed_points(AffineIntMap(3, 1)).kind == "empty"


def test_is_constant(diamond):
    assert is_constant(SelfMap.constant(diamond, (1, 0)))
    assert not is_constant(SelfMap.identity(diamond))
    assert not is_constant(negation(diamond))


def test_orbit_constant_map(path3):
    f = SelfMap.constant(path3, (2,))
    trace = orbit(f, (0,), max_steps=10)
    assert trace.points == ((0,), (2,), (2,))
    assert trace.fixed_point == (2,)


def test_orbit_two_cycle_on_diamond(diamond):
    trace = orbit(negation(diamond), (1, 0), max_steps=10)
    assert trace.points == ((1, 0), (-1, 0), (1, 0))
    assert trace.fixed_point is None


def test_orbit_identity_fixed_immediately(path3):
    trace = orbit(SelfMap.identity(path3), (1,), max_steps=10)
    assert trace.points == ((1,), (1,))
    assert trace.fixed_point == (1,)


def test_orbit_respects_max_steps(path4):
    shift = SelfMap.from_table(
        path4, {(0,): (1,), (1,): (2,), (2,): (3,), (3,): (3,)}
    )
    trace = orbit(shift, (0,), max_steps=2)
    assert trace.points == ((0,), (1,), (2,))
    assert trace.fixed_point is None


def test_orbit_rejects_outside_start(path3):
    with pytest.raises(ValueError, match="not in the image"):
        orbit(SelfMap.identity(path3), (9,), max_steps=3)


def test_compose_identity_laws(diamond):
    ident = SelfMap.identity(diamond)
    neg = negation(diamond)
    assert compose(neg, ident) == neg
    assert compose(ident, neg) == neg
    # Pointwise oracle: negation composed with itself is the identity.
    squared = compose(neg, neg)
    for p in diamond.sorted_points:
        assert squared(p) == p
    assert squared == ident


def test_compose_rejects_image_mismatch(path3, path4):
    with pytest.raises(ValueError, match="different images"):
        compose(SelfMap.identity(path3), SelfMap.identity(path4))


def test_enumeration_counts():
    for n, expected in ((2, 4), (3, 27), (4, 256)):
        image = DigitalImage.of([(k,) for k in range(n)], u=1)
        all_maps = list(enumerate_self_maps(image))
        assert len(all_maps) == expected == count_self_maps(image)
        assert len(set(all_maps)) == expected


def test_enumeration_budget():
    image = DigitalImage.of([(k,) for k in range(9)], u=1)
    with pytest.raises(BudgetExceededError):
        list(enumerate_self_maps(image))


def test_enumeration_order_is_documented_counter(path3):
    first = next(iter(enumerate_self_maps(path3)))
    assert first == SelfMap.constant(path3, (0,))
    every = list(enumerate_self_maps(path3))
    # Last point varies fastest: the second map moves only the last value.
    assert every[1].values == ((0,), (0,), (1,))


def test_fix_of_square_contains_fix(path3, diamond):
    for image in (path3, diamond):
        for f in enumerate_self_maps(image):
            assert fixed_points(f) <= fixed_points(compose(f, f))


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_affine_fixed_points_agree_with_scan(a, b):
    m = AffineIntMap(a, b)
    fp = affine_fixed_points(m)
    window_hits = [x for x in range(-100, 101) if m(x) == x]
    if fp.kind == "all-of-Z":
        assert len(window_hits) == 201
    elif fp.kind == "empty":
        assert not window_hits
    else:
        assert window_hits == [fp.point]
