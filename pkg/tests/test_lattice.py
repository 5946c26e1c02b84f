import itertools
import random

from hypothesis import given, strategies as st

from tropilat import (
    Add, Const, Coord, Gen, GroupElement, IntScale, Max, Min, Neg, Polyhedron,
    eval_term, normalize, point, simplify, term_equals_pwa, term_to_pwa,
)
from tropilat.instances import affine, random_lattice_term
from tropilat.lattice import abs_term, max_of, min_of

from conftest import points


def test_median_normal_form():
    t = min_of(max_of(Coord(i) for i in S) for S in itertools.combinations(range(3), 2))
    nf = normalize(t, dim=3, height=1)
    assert len(nf.clauses) == 3
    assert nf(point(5, -1, 2)) == GroupElement.of(2)


def test_max_over_min_distributes():
    t = Max(Coord(0), Min(Coord(1), Coord(2)))
    nf = normalize(t, dim=3, height=1)
    assert sorted(len(c) for c in nf.clauses) == [2, 2]


def test_simplify_cancels_and_folds_constants():
    t = Add(Add(Gen(0), Const(GroupElement.of(1))), Add(Neg(Gen(0)), Const(GroupElement.of(2))))
    assert simplify(t) == Const(GroupElement.of(3))


def test_abs_and_scale_evaluate():
    x = point(-3)
    assert eval_term(abs_term(Coord(0)), x) == GroupElement.of(3)
    assert eval_term(IntScale(2, Coord(0)), x) == GroupElement.of(-6)


def _instance(seed, h):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    m = rng.randint(1, 4)
    gens = [affine(rng, n, h) for _ in range(m)]
    return gens, random_lattice_term(rng, m), n


@given(st.integers(0, 10 ** 6), st.integers(1, 2), st.data())
def test_normal_form_agrees_with_evaluation(seed, h, data):
    gens, t, n = _instance(seed, h)
    nf = normalize(t, gens, n, h)
    x = data.draw(points(n, h))
    assert nf(x) == eval_term(t, x, gens)
    assert eval_term(simplify(t), x, gens) == eval_term(t, x, gens)


@given(st.integers(0, 10 ** 6), st.integers(1, 2), st.data())
def test_term_to_pwa_agrees_pointwise(seed, h, data):
    gens, t, n = _instance(seed, h)
    B = Polyhedron.box([-5] * n, [5] * n, h)
    F = term_to_pwa(t, gens, B)
    x = data.draw(points(n, h))
    if B.contains(x):
        assert F(x) == eval_term(t, x, gens)
    assert term_equals_pwa(t, gens, F)[0]


@given(st.integers(0, 10 ** 6))
def test_term_equality_detects_a_change(seed):
    gens, t, n = _instance(seed, 1)
    B = Polyhedron.box([-5] * n, [5] * n)
    F = term_to_pwa(t, gens, B)
    shifted = Add(t, Const(GroupElement.of(1)))
    ok, w = term_equals_pwa(shifted, gens, F)
    assert not ok and eval_term(shifted, w, gens) != F(w)


def test_format_term():
    from tropilat import format_term
    t = Min(Gen(0), Add(Coord(1), Neg(Add(Gen(1), Const(GroupElement.of(2))))))
    assert format_term(t) == "min(f0, x1 + -(f1 + (2)))"
    assert format_term(Max(Gen(0), Gen(1)), ["a", "b"]) == "max(a, b)"
