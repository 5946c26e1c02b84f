
import pytest
from hypothesis import given, strategies as st

from tropilat import (
    EQ, LE, LT, AffineFunction, GroupElement, LinearConstraint, PolyhedralSet, Polyhedron, closure,
    dimension, fm_eliminate, is_convex, is_empty, project, sample_point, verify_certificate,
)
from tropilat.errors import EmptySetError
from tropilat.polyhedra import find_point, is_bounded, set_equal, subtract

from conftest import affines

x0, x1 = AffineFunction.coordinate(0, 2), AffineFunction.coordinate(1, 2)
one = AffineFunction.constant(1, 2)


def test_open_interval_is_nonempty_but_closed_contradiction_is_not():
    P = Polyhedron(2, [LinearConstraint(-x0, LT), LinearConstraint(x0 - one, LT)])
    assert not is_empty(P)[0]
    Q = Polyhedron(2, [LinearConstraint(x0 - one, LE), LinearConstraint(one - x0, LT)])
    empty, cert = is_empty(Q)
    assert empty and verify_certificate(Q, True, cert)


def test_infinitesimal_interval_nonempty_at_height_two():
    x = AffineFunction.coordinate(0, 1, 2)
    eps = AffineFunction.constant(GroupElement([0, 1]), 1, 2)
    P = Polyhedron(1, [LinearConstraint(-x, LT), LinearConstraint(x - eps, LT)])
    p = sample_point(P)
    assert GroupElement.zero(2) < p[0] < GroupElement([0, 1])


def test_sample_point_of_empty_raises():
    with pytest.raises(EmptySetError):
        sample_point(Polyhedron(2, [LinearConstraint(one, LE)]))


def test_projection_of_triangle():
    P = Polyhedron(2, [LinearConstraint(-x0, LE), LinearConstraint(-x1, LE), LinearConstraint(x0 + x1 - one, LE)])
    Q = fm_eliminate(P, 1)
    assert Q.dim == 1
    assert set_equal(Q, Polyhedron.box([0], [1]))
    assert set_equal(project(P, [1]), Polyhedron.box([0], [1]))


def test_dimension_examples():
    assert dimension(Polyhedron.box([0, 0], [1, 1])) == 2
    seg = Polyhedron(2, [LinearConstraint(x0 - x1, EQ), LinearConstraint(-x0, LE), LinearConstraint(x0 - one, LE)])
    assert dimension(seg) == 1
    pt = Polyhedron(2, [LinearConstraint(x0, LE), LinearConstraint(-x0, LE), LinearConstraint(x1, EQ)])
    assert dimension(pt) == 0
    assert dimension(Polyhedron(2, [LinearConstraint(one, LE)])) == -1


def test_convexity_and_boundedness():
    A = Polyhedron.box([0, 0], [1, 1])
    B = Polyhedron.box([1, 0], [2, 1])
    C = Polyhedron.box([3, 0], [4, 1])
    assert is_convex(PolyhedralSet.of(A, B))
    assert not is_convex(PolyhedralSet.of(A, C))
    assert is_bounded(PolyhedralSet.of(A, C))
    assert not is_bounded(Polyhedron(2, [LinearConstraint(-x0, LE)]))


def test_closure_of_open_box():
    P = Polyhedron(2, [LinearConstraint(-x0, LT), LinearConstraint(x0 - one, LT),
                       LinearConstraint(-x1, LT), LinearConstraint(x1 - one, LT)])
    assert set_equal(closure(P), Polyhedron.box([0, 0], [1, 1]))


def test_subtract_then_union_restores():
    A = Polyhedron.box([0, 0], [2, 2])
    B = Polyhedron.box([1, 1], [3, 3])
    D = subtract(A, B)
    assert not any(find_point(P & B) for P in D.parts)
    assert set_equal(D.union(PolyhedralSet.of(A & B)), A)


@st.composite
def systems(draw):
    n = draw(st.integers(2, 3))
    h = draw(st.integers(1, 2))
    cons = [LinearConstraint(draw(affines(n, h)), draw(st.sampled_from([LE, LT, EQ])))
            for _ in range(draw(st.integers(1, 5)))]
    return Polyhedron(n, cons, h)


@given(systems())
def test_certificates_always_verify(P):
    empty, cert = is_empty(P)
    assert verify_certificate(P, empty, cert)


@given(systems())
def test_projection_sound_and_complete(P):
    n = P.dim
    Q = project(P, range(n - 1))
    x = find_point(P)
    y = find_point(Q)
    assert (x is None) == (y is None)
    if x is not None:
        assert Q.contains(x[: n - 1])
        h = P.height
        fix = [LinearConstraint(AffineFunction.coordinate(i, n, h) - AffineFunction.constant(y[i], n, h), EQ)
               for i in range(n - 1)]
        assert find_point(P.intersect(fix)) is not None
