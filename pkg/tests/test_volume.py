import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tropilat import (
    EQ, LE, LT, AffineFunction, GroupElement, LinearConstraint, PolyhedralSet, Polyhedron, PreconditionError,
    Simplex, UnsupportedError, simplex_vol, triangulate, unimodular_transform, vol_n, vol_profile,
)

x0, x1 = AffineFunction.coordinate(0, 2), AffineFunction.coordinate(1, 2)


def test_simplex_volumes():
    assert simplex_vol([(0, 0), (1, 0), (0, 1)]) == Fraction(1, 2)
    assert simplex_vol(Simplex(((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)))) == Fraction(1, 6)
    # a segment of lattice length 3 on a diagonal: the lattice is measured in its own span
    assert simplex_vol([(0, 0), (3, 3)]) == 3
    assert simplex_vol([(0, 0), (1, 1), (2, 2)]) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unit_cube_and_triangulation_size(n):
    C = Polyhedron.box([0] * n, [1] * n)
    assert vol_n(C, n) == 1
    simplices = triangulate(C)
    assert sum(simplex_vol(s) for s in simplices) == 1
    assert all(simplex_vol(s) == Fraction(1, len(simplices)) for s in simplices)


def test_profile_of_mixed_dimensions():
    square = Polyhedron.box([0, 0], [1, 1])
    segment = Polyhedron(2, [LinearConstraint(x1, EQ), LinearConstraint(AffineFunction.constant(2, 2) - x0, LE),
                             LinearConstraint(x0 - AffineFunction.constant(5, 2), LE)])
    prof = vol_profile(PolyhedralSet.of(square, segment))
    assert prof.entries == ((2, 1), (1, 3))
    assert vol_profile(Polyhedron.box([1, 1], [1, 1])).entries == ((0, 1),)


def test_overlapping_parts_counted_once():
    A = Polyhedron.box([0, 0], [2, 2])
    B = Polyhedron.box([1, 1], [3, 3])
    assert vol_n(PolyhedralSet.of(A, B), 2) == 7


def test_lower_dimensional_set_has_zero_top_volume():
    seg = Polyhedron(2, [LinearConstraint(x0 - x1, EQ), LinearConstraint(-x0, LE),
                         LinearConstraint(x0 - AffineFunction.constant(1, 2), LE)])
    assert vol_n(seg, 2) == 0
    assert vol_n(seg, 1) == 1


def test_rejections():
    with pytest.raises(UnsupportedError):
        vol_n(Polyhedron.box([0], [1], 2), 1)
    with pytest.raises(PreconditionError):
        vol_profile(Polyhedron(2, [LinearConstraint(-x0, LE)]))
    with pytest.raises(PreconditionError):
        unimodular_transform(Polyhedron.box([0, 0], [1, 1]), [(Polyhedron.box([0, 0], [1, 1]), [[2, 0], [0, 1]], [0, 0])])


def test_cut_and_paste_square():
    # cut the unit square along the diagonal and shear one half onto a parallelogram
    S = Polyhedron.box([0, 0], [1, 1])
    lower = S.intersect([LinearConstraint(x1 - x0, LE)])
    upper = S.intersect([LinearConstraint(x0 - x1, LT)])
    image = unimodular_transform(S, [(lower, [[1, 0], [0, 1]], [0, 0]), (upper, [[1, 1], [0, 1]], [5, 0])])
    assert vol_n(image, 2) == 1


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_order_independence_on_random_polygons(seed):
    rng = random.Random(seed)
    cons = [LinearConstraint(AffineFunction([rng.randint(-3, 3), rng.randint(-3, 3)],
                                            GroupElement.of(-rng.randint(1, 6))), LE) for _ in range(4)]
    P = Polyhedron.box([-3, -3], [3, 3]).intersect(cons)
    v = vol_n(P, 2)
    for order in itertools.permutations(range(2)):
        assert vol_n(P, 2, order) == v
    assert v >= 0


def test_frozen_examples():
    assert simplex_vol([(0, 0), (2, 4)]) == 2
    T = Polyhedron(2, [LinearConstraint(-x0, LE), LinearConstraint(-x1, LE),
                       LinearConstraint(x0 + x1 - AffineFunction.constant(1, 2), LE)])
    assert len(triangulate(T)) == 1
    assert len(triangulate(Polyhedron.box([0, 0, 0], [1, 1, 1]))) == 6
    assert vol_profile(PolyhedralSet.empty_set(2)).entries == ()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_methods_agree_on_sheared_cubes(n):
    rng = random.Random(n)
    C = Polyhedron.box([0] * n, [1] * n)
    U = [[int(i == j) + (rng.randint(-1, 1) if j == i + 1 else 0) for j in range(n)] for i in range(n)]
    image = unimodular_transform(C, [(C, U, [Fraction(1, 3)] * n)])
    for order in itertools.permutations(range(n)):
        assert vol_n(image, n, order, "cylindrical") == vol_n(image, n, order) == 1


@settings(max_examples=20)
@given(st.integers(0, 10 ** 6))
def test_monotone_under_inclusion(seed):
    rng = random.Random(seed)
    T = Polyhedron.box([-2, -2], [2, 2])
    cut = LinearConstraint(AffineFunction([rng.randint(-2, 2), rng.randint(-2, 2)], GroupElement.of(rng.randint(-3, 3))), LE)
    S = T.intersect([cut])
    assert vol_n(S, 2) <= vol_n(T, 2)
