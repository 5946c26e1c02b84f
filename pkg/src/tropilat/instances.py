"""Seeded random instance families used by the test-suite and the scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .group import AffineFunction, GroupElement
from .lattice import Gen, LatticeTerm, Max, Min, term_to_pwa
from .polyhedra import LinearConstraint, LE, EQ, Polyhedron, PolyhedralSet
from .pwa import PwaFunction, lipschitz_search
from .tropical import TropicalPolynomial


def rational(rng: random.Random, lo=-4, hi=4, dens=(1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(lo * 6, hi * 6), 6) if dens is None else \
        Fraction(rng.randint(lo, hi), 1) / rng.choice(dens)


def element(rng, height: int, lo=-3, hi=3) -> GroupElement:
    return GroupElement([rational(rng, lo, hi) for _ in range(height)])


def affine(rng, dim: int, height: int = 1, slope: int = 2, integer: bool = True) -> AffineFunction:
    coeffs = [Fraction(rng.randint(-slope, slope)) if integer else rational(rng, -slope, slope)
              for _ in range(dim)]
    return AffineFunction(coeffs, element(rng, height))


def random_box(rng, dim: int, height: int = 1, span: int = 3) -> Polyhedron:
    lows, highs = [], []
    for _ in range(dim):
        a = rng.randint(-span, span - 1)
        b = rng.randint(a + 1, span)
        lo = GroupElement.of(a, height)
        hi = GroupElement.of(b, height)
        if height > 1:
            lo = lo + GroupElement.unit(height, height - 1).scale(rng.randint(-1, 1))
            hi = hi + GroupElement.unit(height, height - 1).scale(rng.randint(-1, 1))
        lows.append(lo)
        highs.append(hi)
    return Polyhedron.box(lows, highs, height)


def random_lattice_term(rng, n_gens: int, depth: int = 3) -> LatticeTerm:
    """Random min/max tree whose leaves mention every generator at least once."""
    leaves = [Gen(i) for i in range(n_gens)]
    rng.shuffle(leaves)
    extra = rng.randint(0, 2)
    leaves += [Gen(rng.randrange(n_gens)) for _ in range(extra)]
    while len(leaves) > 1:
        i = rng.randrange(len(leaves) - 1)
        op = rng.choice((Min, Max))
        leaves[i:i + 2] = [op(leaves[i], leaves[i + 1])]
    return leaves[0]


@dataclass
class PipelineInstance:
    name: str
    g: PwaFunction
    gens: list
    domain: PolyhedralSet
    M: int
    tags: frozenset


def _l1_max(gens) -> int:
    from math import ceil
    return max(ceil(sum(abs(c) for c in f.coeffs)) for f in gens)


def _restricted(t, gens, parts) -> PwaFunction:
    pieces = []
    for P in parts:
        pieces.extend(term_to_pwa(t, gens, P).pieces)
    n = parts[0].dim
    return PwaFunction(n, pieces, parts[0].height, check=False)


def round_trip_instance(rng, height: int):
    """(term, gens, box, g) for the min/max round trip."""
    dim = rng.randint(1, 3)
    m = rng.randint(2, 4)
    gens = []
    while len(gens) < m:
        f = affine(rng, dim, height)
        if f not in gens:
            gens.append(f)
    t = random_lattice_term(rng, m)
    box = random_box(rng, dim, height)
    return t, gens, box, term_to_pwa(t, gens, box)


def pipeline_instances(seed: int = 0) -> list:
    """Fifty Lipschitz w-combinations on closed domains, tagged by what they exercise."""
    rng = random.Random(seed)
    out = []

    def add(name, g, gens, D, M, *tags):
        out.append(PipelineInstance(name, g, gens, D, M, frozenset(tags)))

    def nontrivial(dim, m, height, box_height=None):
        while True:
            gens = _distinct(rng, m, dim, height, ties=height > 1)
            B = random_box(rng, dim, box_height or height)
            t = random_lattice_term(rng, m)
            g = term_to_pwa(t, gens, B)
            if len(g.affines()) >= 2:
                return g, gens, B

    # convex boxes, height 1
    for k in range(13):
        g, gens, B = nontrivial(1 + k % 2, 2 + k % 2, 1)
        add(f"convex-{k}", g, gens, PolyhedralSet.of(B), _l1_max(gens), "convex")
    # height 2 boxes
    for k in range(12):
        g, gens, B = nontrivial(1 + k % 2, 2 + k % 3 // 2, 2)
        add(f"height2-{k}", g, gens, PolyhedralSet.of(B), _l1_max(gens), "height2")
    # non-convex: separated boxes carrying different terms
    k = 0
    while k < 12:
        dim = 1 + k % 2
        height = 2 if k % 4 == 3 else 1
        gens = _distinct(rng, 2, dim, height, ties=height > 1)
        B1 = Polyhedron.box([0] * dim, [1] * dim, height)
        shift = 3 + rng.randint(0, 2)
        B2 = Polyhedron.box([shift] + [0] * (dim - 1), [shift + 1] + [1] * (dim - 1), height)
        t1 = random_lattice_term(rng, 2)
        t2 = rng.choice([Gen(0), Gen(1), Min(Gen(0), Gen(1)), Max(Gen(0), Gen(1))])
        g = PwaFunction(dim, list(term_to_pwa(t1, gens, B1).pieces) + list(term_to_pwa(t2, gens, B2).pieces),
                        height, check=False)
        if len(g.affines()) < 2:
            continue
        rep = lipschitz_search(g, 16)
        if rep.decided != "lipschitz":
            continue
        tags = ("nonconvex", "height2") if height == 2 else ("nonconvex",)
        add(f"nonconvex-{k}", g, gens, PolyhedralSet(dim, [B1, B2], height), max(rep.M, 1), *tags)
        k += 1
    # unbounded domains
    for k in range(10):
        dim = 1 + (k % 3 == 2)
        homogeneous = k % 2 == 0
        gens = []
        while len(gens) < 2:
            f = affine(rng, dim, 1)
            if homogeneous:
                f = AffineFunction(f.coeffs, GroupElement.zero(1))
            if f not in gens and any(f.coeffs):
                gens.append(f)
        x0 = AffineFunction.coordinate(0, dim)
        cons = [] if k % 4 == 0 else [LinearConstraint(-x0, LE)]
        if dim == 2:
            x1 = AffineFunction.coordinate(1, dim)
            cons += [LinearConstraint(-x1, LE)]
            if not homogeneous:
                cons += [LinearConstraint(x1 - AffineFunction.constant(1, dim), LE)]
        D = Polyhedron(dim, cons, 1)
        t = random_lattice_term(rng, 2)
        if len(term_to_pwa(t, gens, D).affines()) < 2:
            t = Min(Gen(0), Gen(1)) if k % 3 else Max(Gen(0), Gen(1))
        add(f"unbounded-{k}", term_to_pwa(t, gens, D), gens, PolyhedralSet.of(D), _l1_max(gens), "unbounded")
    # the bounded height-2 variant of the two-lines example: Lipschitz but not a min/max of (0, x1)
    add("two-lines-compact", *two_lines(compact=True), 1, "nonconvex", "height2", "not-min-max")
    add("gap", *gap_instance(), 1, "nonconvex", "not-min-max")
    add("tent-on-ray", *tent_on_ray(), 1, "unbounded", "not-min-max")
    return out


def _distinct(rng, m, dim, height, ties=False):
    """Distinct non-constant generators; ``ties`` draws top constant components from {0, 1}."""
    gens = []
    while len(gens) < m:
        f = affine(rng, dim, height)
        if ties:
            top = Fraction(rng.randint(0, 1))
            f = AffineFunction(f.coeffs, GroupElement((top,) + f.const.comps[1:]))
        if f not in gens and any(f.coeffs):
            gens.append(f)
    return gens


def two_lines(compact: bool = False):
    """g = 0 on {x2 = 1}, g = x1 on {x2 = 2}, x1 >= 0; generators (0, x1).

    ``compact`` bounds x1 by the positive infinitesimal (0, 1) at height 2.
    """
    h = 2 if compact else 1
    x0 = AffineFunction.coordinate(0, 2, h)
    x1 = AffineFunction.coordinate(1, 2, h)
    one = AffineFunction.constant(GroupElement.of(1, h), 2, h)
    base = [LinearConstraint(-x0, LE)]
    if compact:
        c = AffineFunction.constant(GroupElement.unit(2, 1), 2, h)
        base.append(LinearConstraint(x0 - c, LE))
    L1 = Polyhedron(2, base + [LinearConstraint(x1 - one, EQ)], h)
    L2 = Polyhedron(2, base + [LinearConstraint(x1 - one.scale(2), EQ)], h)
    zero = AffineFunction.zero(2, h)
    g = PwaFunction(2, [(L1, zero), (L2, x0)], h)
    return g, [zero, x0], PolyhedralSet(2, [L1, L2], h)


def gap_instance():
    """g = x on [0,1], g = 0 on [3,4]: 1-Lipschitz, not a min/max of (x, 0)."""
    x = AffineFunction.coordinate(0, 1)
    B1 = Polyhedron.box([0], [1])
    B2 = Polyhedron.box([3], [4])
    zero = AffineFunction.zero(1)
    g = PwaFunction(1, [(B1, x), (B2, zero)])
    return g, [x, zero], PolyhedralSet(1, [B1, B2], 1)


def tent_on_ray():
    """g = min(x, 2 - x) on [0, 2] and g = 0 on [4, inf), generators (x, 2 - x, 0)."""
    x = AffineFunction.coordinate(0, 1)
    two = AffineFunction.constant(2, 1)
    zero = AffineFunction.zero(1)
    A = Polyhedron.box([0], [1])
    B = Polyhedron.box([1], [2])
    R = Polyhedron(1, [LinearConstraint(AffineFunction.constant(4, 1) - x, LE)], 1)
    g = PwaFunction(1, [(A, x), (B, two - x), (R, zero)])
    return g, [x, two - x, zero], PolyhedralSet(1, [A, B, R], 1)


def random_trop_poly(rng, dim: int, support: int, exp_range: int = 2, height: int = 1) -> TropicalPolynomial:
    if support > (2 * exp_range + 1) ** dim:
        raise ValueError("support larger than the number of available exponents")
    terms = {}
    while len(terms) < support:
        e = tuple(rng.randint(-exp_range, exp_range) for _ in range(dim))
        terms[e] = element(rng, height)
    return TropicalPolynomial(dim, terms)


def demo_instances(seed: int = 0, count: int = 20):
    """(g, fs, box, M) on boxes in Gamma^2 with at most four val(f_i).

    The first two f_i are the coordinate monomials, which makes the map
    injective; M is the l1 norm of g's largest exponent, a valid constant
    because the inverse map is a coordinate projection.
    """
    rng = random.Random(seed)
    T1 = TropicalPolynomial.monomial((1, 0))
    T2 = TropicalPolynomial.monomial((0, 1))
    out = []
    for k in range(count):
        fs = [T1, T2] + [random_trop_poly(rng, 2, 2) for _ in range(k % 3)]
        g = random_trop_poly(rng, 2, 2 + k % 3)
        if k % 5 == 4:
            g = fs[-1] if len(fs) > 2 else T1
        B = random_box(rng, 2)
        M = max(sum(abs(e) for e in I) for I in g.terms)
        out.append((g, fs, B, M))
    return out
