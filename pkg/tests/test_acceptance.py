"""End-to-end acceptance checks; each test records one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines appear in the
"acceptance" section of the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction
from math import factorial

import pytest

from tropilat import (
    AffineFunction, Coord, EQ, GroupElement, LinearConstraint, LE, LT, PolyhedralSet, Polyhedron,
    SearchConfig, demo_main_theorem, is_empty, is_lipschitz_with, normalize,
    project, synth_lipschitz, synth_min_max, term_equals_pwa, to_pwa,
    unimodular_transform, verify_certificate, vol_n, vol_profile,
)
from tropilat.instances import (
    demo_instances, pipeline_instances, random_trop_poly, round_trip_instance, two_lines,
)
from tropilat.lattice import children, max_of, min_of
from tropilat.polyhedra import find_point
from tropilat.pwa import pwa_equal_on, violates_lipschitz
from tropilat.synthesis import violates_condition_4

try:
    from conftest import record
except ImportError:  # pragma: no cover - direct script run outside pytest's rootdir
    record = print


def _line(k: int, ok: bool, detail: str) -> str:
    return f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})"


def _rand_point(rng, n):
    return tuple(GroupElement([Fraction(rng.randint(-1000, 1000), rng.randint(1, 60))]) for _ in range(n))


# --------------------------------------------------------------------------
# 1. k-th order statistic as min of maxes


def test_order_statistic_identity():
    rng = random.Random(1)
    t0 = time.perf_counter()
    bad = 0
    checked = 0
    for n in range(1, 6):
        for k in range(1, n + 1):
            term = min_of(max_of(Coord(i) for i in S) for S in itertools.combinations(range(n), k))
            nf = normalize(term, dim=n, height=1)
            for _ in range(1000):
                x = _rand_point(rng, n)
                checked += 1
                if nf(x) != sorted(x)[k - 1]:
                    bad += 1
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 10
    record(_line(1, ok, f"{checked} evaluations, {bad} mismatches, {dt:.2f}s < 10s"))
    assert ok


# --------------------------------------------------------------------------
# 2. min/max round trip


def test_min_max_round_trip():
    rng = random.Random(2)
    t0 = time.perf_counter()
    failures = []
    for k in range(200):
        height = 1 + k % 2
        t, gens, box, g = round_trip_instance(rng, height)
        res = synth_min_max(g, gens)
        if not res.accepted:
            failures.append((k, "rejected"))
            continue
        eq, x = term_equals_pwa(res.term, gens, g, box)
        if not eq:
            failures.append((k, x))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 300
    record(_line(2, ok, f"200 instances at heights 1 and 2, {len(failures)} failures, {dt:.1f}s < 300s"))
    assert ok, failures[:3]


# --------------------------------------------------------------------------
# 3. the two-lines counterexample


def test_two_lines_rejected():
    details = []
    ok = True
    for compact in (False, True):
        g, gens, D = two_lines(compact)
        res = synth_min_max(g, gens, D)
        good = (not res.accepted) and violates_condition_4(g, gens, *res.witness)
        x, y = res.witness if res.witness else (None, None)
        if good:
            gx, gy = g(x), g(y)
            good = all(f(x) > gx or gy > f(y) for f in gens)
        ok &= good
        details.append(f"{'compact' if compact else 'unbounded'} rejected={not res.accepted}")
    g, _, _ = two_lines(False)
    lip_fail = 0
    for M in range(11):
        holds, pair = is_lipschitz_with(g, M)
        if not holds and violates_lipschitz(g, M, *pair):
            lip_fail += 1
    ok &= lip_fail == 11
    details.append(f"Lipschitz refuted with exact witness for {lip_fail}/11 constants 0..10")
    record(_line(3, ok, ", ".join(details)))
    assert ok


# --------------------------------------------------------------------------
# 4. synthesis pipeline


def test_lipschitz_pipeline():
    cfg = SearchConfig(shortcut=False)
    t0 = time.perf_counter()
    insts = pipeline_instances(0)
    failures = []
    for inst in insts:
        try:
            t = synth_lipschitz(inst.g, inst.gens, inst.domain, inst.M, cfg)
        except Exception as e:  # noqa: BLE001 - every failure is reported
            failures.append((inst.name, repr(e)))
            continue
        eq, x = term_equals_pwa(t, inst.gens, inst.g, inst.domain)
        if not eq:
            failures.append((inst.name, x))
    dt = time.perf_counter() - t0
    count = lambda tag: sum(tag in i.tags for i in insts)
    mix = (len(insts) >= 50 and count("nonconvex") >= 10 and count("height2") >= 10
           and count("unbounded") >= 5)
    ok = mix and not failures and dt < 900
    record(_line(4, ok, f"{len(insts)} instances (nonconvex {count('nonconvex')}, height-2 "
                        f"{count('height2')}, unbounded {count('unbounded')}), {len(failures)} failures, "
                        f"{dt:.1f}s < 900s"))
    assert ok, failures[:3]


# --------------------------------------------------------------------------
# 5. volumes


def _cube(n):
    return Polyhedron.box([0] * n, [1] * n)


def _simplex(n):
    xs = [AffineFunction.coordinate(i, n) for i in range(n)]
    one = AffineFunction.constant(1, n)
    return Polyhedron(n, [LinearConstraint(-x, LE) for x in xs]
                      + [LinearConstraint(sum(xs[1:], xs[0]) - one, LE)])


def _random_unimodular(rng, n):
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(n + 1):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
    perm = list(range(n))
    rng.shuffle(perm)
    signs = [rng.choice((-1, 1)) for _ in range(n)]
    return [[s * v for v in U[p]] for s, p in zip(signs, perm)]


def _random_cut(rng, n):
    coeffs = [Fraction(rng.randint(-2, 2)) for _ in range(n)]
    if not any(coeffs):
        coeffs[0] = Fraction(1)
    return AffineFunction(coeffs, GroupElement([Fraction(rng.randint(-6, 6), 4)]))


def _split(P, cut):
    return [P.intersect([LinearConstraint(cut, LE)]), P.intersect([LinearConstraint(-cut, LT)])]


def _random_piecewise_map(rng, P):
    n = P.dim
    parts = [P]
    for _ in range(rng.randint(0, 2)):
        cut = _random_cut(rng, n)
        parts = [q for p in parts for q in _split(p, cut) if find_point(q) is not None]
    return [(Q, _random_unimodular(rng, n),
             [1000 * (k + 1) + Fraction(rng.randint(-9, 9), 3)] + [Fraction(rng.randint(-9, 9), 2)] * (n - 1))
            for k, Q in enumerate(parts)]


def _triangle_in_space():
    x, y, z = (AffineFunction.coordinate(i, 3) for i in range(3))
    two = AffineFunction.constant(2, 3)
    return Polyhedron(3, [LinearConstraint(-x, LE), LinearConstraint(-y, LE),
                          LinearConstraint(x + y - two, LE), LinearConstraint(z - x - y, EQ)])


def test_volume_suite():
    rng = random.Random(5)
    problems = []
    for n in range(1, 5):
        if vol_n(_cube(n), n) != 1:
            problems.append(f"cube {n}")
        if vol_n(_simplex(n), n) != Fraction(1, factorial(n)):
            problems.append(f"simplex {n}")
    instances = [(f"cube{n}", _cube(n)) for n in range(1, 5)] + \
                [(f"simplex{n}", _simplex(n)) for n in range(1, 5)]
    maps = 0
    for name, P in instances:
        n = P.dim
        v = vol_n(P, n)
        for _ in range(20):
            image = unimodular_transform(PolyhedralSet.of(P), _random_piecewise_map(rng, P))
            maps += 1
            if vol_n(image, n) != v:
                problems.append(f"map on {name}")
        for _ in range(5):
            lo, hi = _split(P, _random_cut(rng, n))
            if vol_n(lo, n) + vol_n(hi, n) != v:
                problems.append(f"split on {name}")
        orders = list(itertools.permutations(range(n)))
        for order in rng.sample(orders, min(len(orders), 6)):
            if vol_n(P, n, order) != v:
                problems.append(f"order {order} on {name}")
    # a lower-dimensional piece: its profile is also invariant
    T = _triangle_in_space()
    prof = vol_profile(T)
    for _ in range(5):
        image = unimodular_transform(PolyhedralSet.of(T), _random_piecewise_map(rng, T))
        maps += 1
        if vol_profile(image) != prof:
            problems.append("map on triangle")
    ok = not problems
    record(_line(5, ok, f"unit cubes and simplices n<=4 exact, {maps} piecewise unimodular maps, "
                        f"splits and orders; {len(problems)} problems"))
    assert ok, problems[:5]


# --------------------------------------------------------------------------
# 6. QE certificates


def _random_system(rng):
    n = rng.randint(2, 3)
    cons = []
    for _ in range(rng.randint(2, 6)):
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        const = GroupElement([Fraction(rng.randint(-6, 6), rng.randint(1, 3))])
        rel = rng.choice((LE, LE, LT, EQ))
        cons.append(LinearConstraint(AffineFunction(coeffs, const), rel))
    return Polyhedron(n, cons)


def test_qe_certificates():
    rng = random.Random(6)
    failures = 0
    empties = 0
    for _ in range(200):
        P = _random_system(rng)
        empty, cert = is_empty(P)
        empties += empty
        if not verify_certificate(P, empty, cert):
            failures += 1
            continue
        n = P.dim
        keep = list(range(n - 1))
        Q = project(P, keep)
        q_empty, _ = is_empty(Q)
        if q_empty != empty:
            failures += 1
            continue
        if empty:
            continue
        # soundness: points of P project into Q
        x = cert.witness
        if not Q.contains(x[: n - 1]):
            failures += 1
        # completeness: a point of Q lifts to a point of P
        y = find_point(Q)
        fixed = P.intersect([LinearConstraint(AffineFunction.coordinate(i, n) - AffineFunction.constant(y[i], n), EQ)
                             for i in keep])
        if find_point(fixed) is None:
            failures += 1
    ok = failures == 0
    record(_line(6, ok, f"200 systems ({empties} empty), {failures} certificate or projection failures"))
    assert ok


# --------------------------------------------------------------------------
# 7. Gauss valuation


def test_gauss_valuation_multiplicative():
    rng = random.Random(7)
    failures = 0
    slope_failures = 0
    for k in range(50):
        dim = 1 + k % 3
        height = 1 + (k % 5 == 4)
        F = random_trop_poly(rng, dim, rng.randint(1, 6), exp_range=3, height=height)
        G = random_trop_poly(rng, dim, rng.randint(1, 6), exp_range=3, height=height)
        U = PolyhedralSet.universe(dim, height)
        pF, pG, pFG = to_pwa(F, U), to_pwa(G, U), to_pwa(F * G, U)
        eq, _ = pwa_equal_on(pFG, pF + pG, U)
        if not eq:
            failures += 1
        for poly, pw in ((F, pF), (G, pG), (F * G, pFG)):
            support = {tuple(Fraction(e) for e in I) for I in poly.terms}
            if any(tuple(f.coeffs) not in support for _, f in pw.pieces):
                slope_failures += 1
    ok = failures == 0 and slope_failures == 0
    record(_line(7, ok, f"50 pairs proved multiplicative {50 - failures}/50, "
                        f"slope containment failures {slope_failures}"))
    assert ok


# --------------------------------------------------------------------------
# 8. tropical main-theorem demo


def _only_lattice_ops(t) -> bool:
    if isinstance(t, Coord):
        return False
    return all(_only_lattice_ops(c) for c in children(t))


def test_main_theorem_demo():
    t0 = time.perf_counter()
    failures = []
    insts = demo_instances(0, 20)
    for k, (g, fs, B, M) in enumerate(insts):
        try:
            res = demo_main_theorem(g, fs, B, M)
        except Exception as e:  # noqa: BLE001
            failures.append((k, repr(e)))
            continue
        vals = [to_pwa(f, B) for f in fs]
        eq, x = term_equals_pwa(res.term, vals, to_pwa(g, B), B)
        if not eq or not _only_lattice_ops(res.term):
            failures.append((k, x))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 300 and len(insts) == 20 and all(len(fs) <= 4 for _, fs, _, _ in insts)
    record(_line(8, ok, f"20 instances, {len(failures)} failures, {dt:.1f}s < 300s"))
    assert ok, failures[:3]


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
