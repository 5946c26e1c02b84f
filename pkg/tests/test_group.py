from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropilat import AffineFunction, GroupElement, HeightMismatchError, point
from tropilat.group import convex_quotient, midpoint, norm_inf

from conftest import affines, elements, points


def test_lexicographic_order_examples():
    a = GroupElement([0, 1])
    b = GroupElement([1, -100])
    assert a < b
    assert GroupElement([0, 1]) > GroupElement.zero(2)
    assert GroupElement([0, -1]).sign() == -1
    assert abs(GroupElement([-1, 5])) == GroupElement([1, -5])


def test_mixed_heights_raise():
    with pytest.raises(HeightMismatchError):
        GroupElement([1]) + GroupElement([1, 0])


def test_quotient_drops_last_component():
    assert GroupElement([3, 7]).quotient() == GroupElement([3])
    assert GroupElement([3, 7, 1]).quotient(2) == GroupElement([3])


def test_affine_evaluation():
    f = AffineFunction([2, Fraction(-1, 2)], GroupElement([1, 1]))
    x = point([1, 0], [2, 4], height=2)
    assert f(x) == GroupElement([2 - 1 + 1, 0 - 2 + 1])


@given(st.integers(1, 3).flatmap(lambda h: st.tuples(elements(h), elements(h), elements(h))))
def test_order_is_total_and_translation_invariant(abc):
    a, b, c = abc
    assert (a < b) + (a == b) + (a > b) == 1
    assert (a < b) == (a + c < b + c)


@given(st.integers(1, 3).flatmap(lambda h: st.tuples(elements(h), elements(h))),
       st.fractions(min_value=Fraction(1, 10), max_value=10))
def test_positive_scaling_preserves_order(ab, q):
    a, b = ab
    assert (a < b) == (a.scale(q) < b.scale(q))


@given(st.integers(2, 3).flatmap(lambda h: st.tuples(elements(h), elements(h))))
def test_quotient_is_monotone_homomorphism(ab):
    a, b = ab
    assert (a + b).quotient() == a.quotient() + b.quotient()
    if a <= b:
        assert a.quotient() <= b.quotient()


@given(st.integers(1, 3).flatmap(lambda h: st.tuples(elements(h), elements(h))))
def test_midpoint_between(ab):
    a, b = sorted(ab)
    m = midpoint(a, b)
    assert a <= m <= b


@given(st.data())
def test_affine_is_affine(data):
    h = data.draw(st.integers(1, 2))
    n = data.draw(st.integers(1, 3))
    f = data.draw(affines(n, h))
    x = data.draw(points(n, h))
    y = data.draw(points(n, h))
    s = tuple(a + b for a, b in zip(x, y))
    zero = tuple(GroupElement.zero(h) for _ in range(n))
    assert f(s) - f(zero) == (f(x) - f(zero)) + (f(y) - f(zero))
    assert norm_inf(x) >= GroupElement.zero(h)
    if h > 1:
        assert convex_quotient(f)(tuple(c.quotient() for c in x)) == f(x).quotient()
