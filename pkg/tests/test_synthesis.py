import random

import pytest
from hypothesis import given, settings, strategies as st

from tropilat import (
    LE, AffineFunction, Gen, GroupElement, LinearConstraint, Max, Min, NotLipschitzError,
    NotWCombinationError, PolyhedralSet, Polyhedron, SearchConfig, point, synth_lipschitz,
    synth_min_max, term_equals_pwa, term_to_pwa,
)
from tropilat.instances import gap_instance, round_trip_instance, tent_on_ray, two_lines
from tropilat.synthesis import in_S, minimal_transversals, violates_condition_4

x = AffineFunction.coordinate(0, 1)
zero = AffineFunction.zero(1)
interval = Polyhedron.box([-1], [1])
abs_x = term_to_pwa(Max(Gen(0), Gen(1)), [x, -x], interval)
NO_SHORTCUT = SearchConfig(shortcut=False)


def test_minimal_transversals_of_triangle():
    got = {frozenset(s) for s in minimal_transversals([{0, 1}, {1, 2}, {0, 2}])}
    assert got == {frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 2})}


def test_min_and_max_accepted_with_expected_s_min():
    B = PolyhedralSet.of(interval)
    r = synth_min_max(term_to_pwa(Min(Gen(0), Gen(1)), [x, zero], B), [x, zero])
    assert r.accepted and r.s_min == ((0,), (1,))
    r = synth_min_max(abs_x, [x, -x])
    assert r.accepted and r.s_min == ((0, 1),)
    assert in_S(abs_x, [x, -x], B, (0, 1))
    assert not in_S(abs_x, [x, -x], B, (0,))


def test_two_lines_rejected_with_frozen_witness():
    g, gens, D = two_lines()
    r = synth_min_max(g, gens, D)
    assert not r.accepted
    assert r.witness == (point(1, 1), point(1, 2))
    assert violates_condition_4(g, gens, *r.witness)


def test_compact_two_lines_rejected():
    g, gens, D = two_lines(compact=True)
    r = synth_min_max(g, gens, D)
    assert not r.accepted and violates_condition_4(g, gens, *r.witness)


def test_gap_instance_needs_the_full_pipeline():
    g, gens, D = gap_instance()
    r = synth_min_max(g, gens, D)
    assert not r.accepted and r.witness == (point("7/2"), point("1/2"))
    t = synth_lipschitz(g, gens, D, 1)
    assert term_equals_pwa(t, gens, g, D)[0]


def test_preconditions_raise_with_witnesses():
    with pytest.raises(NotWCombinationError) as e:
        synth_min_max(abs_x, [x, zero])
    assert abs_x(e.value.witness) not in (x(e.value.witness), zero(e.value.witness))
    with pytest.raises(NotLipschitzError):
        synth_lipschitz(abs_x, [x, -x], None, 0)


def test_pipeline_without_shortcut_on_abs():
    t = synth_lipschitz(abs_x, [x, -x], config=NO_SHORTCUT)
    assert term_equals_pwa(t, [x, -x], abs_x)[0]


def test_pipeline_on_unbounded_domains():
    ray = Polyhedron(1, [LinearConstraint(-x, LE)])
    one = AffineFunction.constant(1, 1)
    g = term_to_pwa(Max(Gen(0), Gen(1)), [x, one], ray)
    t = synth_lipschitz(g, [x, one], config=NO_SHORTCUT)
    assert term_equals_pwa(t, [x, one], g)[0]
    g, gens, D = tent_on_ray()
    t = synth_lipschitz(g, gens, D, 1, NO_SHORTCUT)
    assert term_equals_pwa(t, gens, g, D)[0]


def test_pipeline_at_height_two():
    x2 = AffineFunction.coordinate(0, 1, 2)
    eps = AffineFunction.constant(GroupElement([0, 1]), 1, 2)
    B = Polyhedron.box([GroupElement([-1, 0])], [GroupElement([1, 0])], 2)
    g = term_to_pwa(Min(Gen(0), Gen(1)), [x2, eps], B)
    t = synth_lipschitz(g, [x2, eps], config=NO_SHORTCUT)
    assert term_equals_pwa(t, [x2, eps], g)[0]


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_round_trip(seed, h):
    t, gens, box, g = round_trip_instance(random.Random(seed), h)
    r = synth_min_max(g, gens)
    assert r.accepted and term_equals_pwa(r.term, gens, g, box)[0]
