"""Shared hypothesis strategies and the acceptance summary printer."""

from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from tropilat import AffineFunction, GroupElement, Polyhedron

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list = []


def record(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def elements(height: int):
    return st.lists(small_rationals, min_size=height, max_size=height).map(GroupElement)


def heights():
    return st.integers(min_value=1, max_value=3)


@st.composite
def elements_any(draw, height=None):
    h = height or draw(heights())
    return draw(elements(h))


@st.composite
def affines(draw, dim: int, height: int, integer: bool = True):
    if integer:
        coeffs = draw(st.lists(st.integers(-3, 3), min_size=dim, max_size=dim))
    else:
        coeffs = draw(st.lists(small_rationals, min_size=dim, max_size=dim))
    return AffineFunction([Fraction(c) for c in coeffs], draw(elements(height)))


@st.composite
def points(draw, dim: int, height: int):
    return tuple(draw(st.lists(elements(height), min_size=dim, max_size=dim)))


@st.composite
def boxes(draw, dim: int, height: int = 1):
    lows, highs = [], []
    for _ in range(dim):
        a = draw(st.integers(-3, 2))
        b = draw(st.integers(a + 1, 3))
        lows.append(a)
        highs.append(b)
    return Polyhedron.box(lows, highs, height)
