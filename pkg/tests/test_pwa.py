from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropilat import (
    LE, LT, AffineFunction, GroupElement, LinearConstraint, Polyhedron, PreconditionError,
    PwaFunction, extend_to_closure, formal_max, formal_min, is_lipschitz_with, is_w_combination,
    lipschitz_search, point,
)
from tropilat.instances import two_lines
from tropilat.pwa import pwa_equal_on, violates_lipschitz

from conftest import affines, points

x = AffineFunction.coordinate(0, 1)
zero = AffineFunction.zero(1)
interval = Polyhedron.box([-1], [1])
neg = Polyhedron.box([-1], [0])
pos = Polyhedron.box([0], [1])
abs_x = PwaFunction(1, [(neg, -x), (pos, x)])


def test_evaluation_and_consistency():
    assert abs_x(point(Fraction(-1, 2))) == GroupElement.of(Fraction(1, 2))
    with pytest.raises(PreconditionError):
        PwaFunction(1, [(neg, x), (pos, x + AffineFunction.constant(1, 1))])


def test_w_combination():
    ok, cover = is_w_combination(abs_x, [x, -x])
    assert ok and cover == ((0, 1), (0, 1))  # both meet each piece at 0
    ok, w = is_w_combination(abs_x, [x, zero])
    assert not ok and abs_x(w) != x(w) and abs_x(w) != zero(w)


def test_lipschitz_constants():
    assert is_lipschitz_with(abs_x, 1) == (True, None)
    ok, (a, b) = is_lipschitz_with(abs_x, 0)
    assert not ok and violates_lipschitz(abs_x, 0, a, b)
    assert lipschitz_search(abs_x, 16).M == 1
    steep = PwaFunction.affine(x.scale(3), interval)
    assert lipschitz_search(steep, 16).M == 3


def test_two_lines_not_lipschitz_and_search_gives_up():
    g, _, _ = two_lines()
    rep = lipschitz_search(g, 8)
    assert rep.decided == "unknown" and rep.cap == 8


def test_gap_lipschitz_constant_below_slopes():
    # x on [0,1], 0 on [3,4]: jumps of 1 across a gap of 2, so M = 1 suffices
    g = PwaFunction(1, [(pos, x), (Polyhedron.box([3], [4]), zero)])
    assert lipschitz_search(g, 16).M == 1


def test_extend_to_closure():
    half_open = Polyhedron(1, [LinearConstraint(-x, LT), LinearConstraint(x - AffineFunction.constant(1, 1), LE)])
    F = PwaFunction(1, [(half_open, x)])
    assert extend_to_closure(F)(point(0)) == GroupElement.zero(1)
    jump = PwaFunction(1, [(neg, zero), (half_open, x + AffineFunction.constant(1, 1))])
    with pytest.raises(PreconditionError):
        extend_to_closure(jump)


def test_formal_min_max_of_identity_and_negation():
    F = PwaFunction.affine(x, interval)
    G = PwaFunction.affine(-x, interval)
    assert pwa_equal_on(formal_max(F, G), abs_x)[0]
    assert pwa_equal_on(formal_min(F, G), -abs_x)[0]


@given(st.data())
def test_formal_ops_pointwise(data):
    h = data.draw(st.integers(1, 2))
    B = Polyhedron.box([-2, -2], [2, 2], h)
    f, g = data.draw(affines(2, h)), data.draw(affines(2, h))
    F, G = PwaFunction.affine(f, B), PwaFunction.affine(g, B)
    lo, hi = formal_min(F, G), formal_max(F, G)
    p = data.draw(points(2, h))
    if B.contains(p):
        assert lo(p) == min(f(p), g(p)) and hi(p) == max(f(p), g(p))
    assert pwa_equal_on(lo + hi, F + G)[0]


@given(st.data())
def test_search_result_is_least(data):
    f = data.draw(affines(1, 1))
    g = data.draw(affines(1, 1))
    F = formal_max(PwaFunction.affine(f, interval), PwaFunction.affine(g, interval))
    M = lipschitz_search(F, 64).M
    assert is_lipschitz_with(F, M)[0]
    if M > 0:
        assert not is_lipschitz_with(F, M - 1)[0]
