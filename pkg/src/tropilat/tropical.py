"""Gauss-valuation tropicalization of Laurent polynomials.

A coefficient is represented only by its valuation, which is all the Gauss
formula ``v_g(sum a_I T^I) = min_I v(a_I) + I.g`` consumes.  Polynomials
become concave piecewise Z-affine functions on Gamma^n; rational functions
become differences of two such functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionMismatchError, PreconditionError, UnsupportedError, VerificationError
from .group import AffineFunction, GroupElement
from .linalg import solve_left
from .lattice import (
    Coord, Gen, LatticeTerm, affine_as_term, simplify, substitute_gens, term_equals_pwa, transform,
)
from .polyhedra import (
    EQ, LE, LT, LinearConstraint, Polyhedron, PolyhedralSet, as_set, doubled, feasible, find_point,
    implicit_equalities, project,
)
from .pwa import PwaFunction
from .config import DEFAULT, SearchConfig


class TropicalPolynomial:
    """Finite map from integer exponent vectors to coefficient valuations."""

    __slots__ = ("dim", "height", "terms")

    def __init__(self, dim: int, terms: Mapping, height: int | None = None):
        clean = {}
        for exp, val in dict(terms).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != dim:
                raise DimensionMismatchError("exponent length does not match dim")
            if not isinstance(val, GroupElement):
                val = GroupElement.of(val, height or 1)
            clean[exp] = min(val, clean[exp]) if exp in clean else val
        if not clean:
            raise PreconditionError("a tropical polynomial needs a non-empty support")
        hs = {v.height for v in clean.values()}
        if len(hs) != 1:
            raise PreconditionError("coefficient valuations have different heights")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "height", hs.pop())
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("TropicalPolynomial is immutable")

    @classmethod
    def monomial(cls, exp, val=0, height: int = 1) -> "TropicalPolynomial":
        return cls(len(exp), {tuple(exp): val}, height)

    def term_affine(self, exp) -> AffineFunction:
        return AffineFunction._raw(tuple(Fraction(e) for e in exp), self.terms[exp])

    def affines(self) -> list:
        return [self.term_affine(e) for e in self.terms]

    def __eq__(self, other):
        return isinstance(other, TropicalPolynomial) and self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, tuple(self.terms.items())))

    def __mul__(self, other):
        return trop_mul(self, other)

    def __add__(self, other):
        return trop_add(self, other)

    def __repr__(self):
        return f"TropicalPolynomial({self.dim}, {self.terms})"


@dataclass(frozen=True)
class TropicalRationalFunction:
    numerator: TropicalPolynomial
    denominator: TropicalPolynomial

    def __post_init__(self):
        if self.numerator.dim != self.denominator.dim:
            raise DimensionMismatchError("numerator and denominator dimensions differ")

    @classmethod
    def of(cls, F) -> "TropicalRationalFunction":
        if isinstance(F, TropicalRationalFunction):
            return F
        return cls(F, TropicalPolynomial.monomial((0,) * F.dim, GroupElement.zero(F.height), F.height))

    @property
    def dim(self) -> int:
        return self.numerator.dim


def gauss_eval(F, gamma: Sequence[GroupElement]) -> GroupElement:
    """min_I v(a_I) + I.gamma; numerator minus denominator for rational functions."""
    if isinstance(F, TropicalRationalFunction):
        return gauss_eval(F.numerator, gamma) - gauss_eval(F.denominator, gamma)
    if len(gamma) != F.dim:
        raise DimensionMismatchError("point dimension does not match")
    return min(f(gamma) for f in F.affines())


def trop_mul(F: TropicalPolynomial, G: TropicalPolynomial) -> TropicalPolynomial:
    """Min-plus convolution of coefficient valuations."""
    if F.dim != G.dim:
        raise DimensionMismatchError("dimensions differ")
    out = {}
    for I, a in F.terms.items():
        for J, b in G.terms.items():
            K = tuple(i + j for i, j in zip(I, J))
            v = a + b
            if K not in out or v < out[K]:
                out[K] = v
    return TropicalPolynomial(F.dim, out)


def trop_add(F: TropicalPolynomial, G: TropicalPolynomial) -> TropicalPolynomial:
    """Support union, min on collisions (exact wherever the two values differ)."""
    if F.dim != G.dim:
        raise DimensionMismatchError("dimensions differ")
    out = dict(F.terms)
    for J, b in G.terms.items():
        out[J] = min(out[J], b) if J in out else b
    return TropicalPolynomial(F.dim, out)


def to_pwa(F, region) -> PwaFunction:
    """val(F) on ``region``: one piece per term that attains the minimum."""
    R = as_set(region)
    if isinstance(F, TropicalRationalFunction):
        return to_pwa(F.numerator, R) - to_pwa(F.denominator, R)
    if R.dim != F.dim:
        raise DimensionMismatchError("region dimension does not match")
    if R.height != F.height:
        raise DimensionMismatchError("region and valuations have different heights")
    affs = F.affines()
    pieces = []
    for A in R.parts:
        for i, f in enumerate(affs):
            P = A.intersect([LinearConstraint(f - g, LE) for j, g in enumerate(affs) if j != i])
            if feasible(P):
                pieces.append((P, f))
    return PwaFunction(F.dim, pieces, R.height, check=False)


# --------------------------------------------------------------------------
# writing val(g) through the val(f_i)


@dataclass(frozen=True)
class DemoResult:
    term: LatticeTerm
    image: PolyhedralSet
    image_function: PwaFunction
    generators: tuple


def _refine(fns: Sequence[PwaFunction], D: PolyhedralSet):
    """Pieces of D on which every fn is affine: list of (polyhedron, [affine_i])."""
    cur = [(P, []) for P in D.parts if feasible(P)]
    for F in fns:
        nxt = []
        for P, acc in cur:
            for Q, f in F.pieces:
                R = P & Q
                if feasible(R):
                    nxt.append((R, acc + [f]))
        cur = nxt
    return cur


def _distinct_points(n: int, h: int):
    """Disjuncts of x != y on Gamma^(2n)."""
    out = []
    for j in range(n):
        d = AffineFunction.coordinate(j, 2 * n, h) - AffineFunction.coordinate(n + j, 2 * n, h)
        out.append(LinearConstraint(d, LT))
        out.append(LinearConstraint(-d, LT))
    return out


def injectivity_witness(pieces, n: int, h: int):
    """A pair x != y with equal images, or None if the piecewise map is injective."""
    disj = _distinct_points(n, h)
    for a, (P, fa) in enumerate(pieces):
        for Q, fb in pieces[a:]:
            base = doubled(P, False) & doubled(Q, True)
            same = [LinearConstraint(f.embed(2 * n, range(n)) - g.embed(2 * n, range(n, 2 * n)), EQ)
                    for f, g in zip(fa, fb)]
            base = base.intersect(same)
            for c in disj:
                pt = find_point(base.intersect(c))
                if pt is not None:
                    return tuple(pt[:n]), tuple(pt[n:])
    return None


def _graph(P: Polyhedron, fs, ell: int):
    """{(x, z) : x in P, z = F(x)} in Gamma^(n + ell)."""
    n = P.dim
    G = P.embed(n + ell, range(n))
    cons = []
    for i, f in enumerate(fs):
        z = AffineFunction.coordinate(n + i, n + ell, P.height)
        cons.append(LinearConstraint(z - f.embed(n + ell, range(n)), EQ))
    return G.intersect(cons)


def _left_inverse(P: Polyhedron, fs):
    """Rows/offsets of z -> x inverting x -> (f_i(x)) on aff(P)."""
    n, h = P.dim, P.height
    eqs = implicit_equalities(P)
    rows = [list(f.coeffs) for f in fs] + [list(e.coeffs) for e in eqs]
    ell = len(fs)
    L = []
    for j in range(n):
        y = solve_left(rows, [Fraction(int(i == j)) for i in range(n)])
        if y is None:
            raise PreconditionError("the map is not injective on a piece")
        L.append(y)
    # x = sum_i y_i (z_i - c_i) + sum_k y_{ell+k} (-e_k)
    M = [row[:ell] for row in L]
    offs = []
    for row in L:
        acc = GroupElement.zero(h)
        for i, f in enumerate(fs):
            if row[i]:
                acc = acc - f.const.scale(row[i])
        for k, e in enumerate(eqs):
            if row[ell + k]:
                acc = acc - e.const.scale(row[ell + k])
        offs.append(acc)
    return M, offs


def demo_main_theorem(g, fs: Sequence, D, M: int, config: SearchConfig = DEFAULT) -> DemoResult:
    """Express val(g) on D through +, -, min, max of the val(f_i) and constants."""
    from .synthesis import synth_lipschitz
    D = as_set(D)
    n, h = D.dim, D.height
    g = TropicalRationalFunction.of(g)
    fs = [TropicalRationalFunction.of(f) for f in fs]
    ell = len(fs)
    Fi = [to_pwa(f, D) for f in fs]
    Gv = to_pwa(g, D)
    pieces = _refine(Fi, D)
    bad = injectivity_witness(pieces, n, h)
    if bad is not None:
        raise PreconditionError("the map to (val f_i) is not injective on D", witness=bad)
    img_parts, G_pieces = [], []
    for P, aff in pieces:
        image = project(_graph(P, aff, ell), range(n, n + ell))
        img_parts.append(image)
        rows, offs = _left_inverse(P, aff)
        for Q, gq in Gv.pieces:
            R = P & Q
            if not feasible(R):
                continue
            piece = project(_graph(R, aff, ell), range(n, n + ell))
            G_pieces.append((piece, gq.pullback(rows, offs)))
    image = PolyhedralSet(ell, img_parts, h)
    G = PwaFunction(ell, G_pieces, h, check=False)
    gens = G.affines()
    for f in gens:
        if not f.is_z_affine():
            raise UnsupportedError("val(g) has non-integer slopes in the val(f_i)", )
    t = synth_lipschitz(G, gens, image, M, config)
    as_coords = substitute_gens(t, [affine_as_term(f) for f in gens])
    term = simplify(transform(as_coords, lambda leaf: Gen(leaf.index) if isinstance(leaf, Coord) else leaf))
    ok, x = term_equals_pwa(term, Fi, Gv, D)
    if not ok:
        raise VerificationError("term differs from val(g)", x)
    return DemoResult(term, image, G, tuple(gens))
