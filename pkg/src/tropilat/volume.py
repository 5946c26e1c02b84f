"""Lattice-normalized volumes of bounded rational polyhedral sets.

The unit simplex spanned by a lattice basis has volume 1/n!, so volumes are
invariant under GL_N(Z) maps and rational translations.  Sets are cut into
disjoint convex pieces, each piece is triangulated (by pulling vertices, or by
staircase simplices over cylindrical cells), and simplex volumes are measured
against the lattice of integer points in the simplex's own linear span.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from fractions import Fraction
from math import factorial
from typing import Sequence

from .celldecomp import Cell, linear_decomposition
from .errors import DimensionMismatchError, PreconditionError, UnsupportedError
from .group import GroupElement
from .linalg import det, inverse, rank, saturated_basis
from .polyhedra import (
    Polyhedron, PolyhedralSet, as_set, dimension, feasible, find_point, is_bounded,
    polyhedron_dimension, set_equal, subtract, subtract_polyhedron,
)
from .pwa import ordered_map


@dataclass(frozen=True)
class Simplex:
    vertices: tuple  # tuple of tuples of Fraction

    @property
    def ambient(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> list:
        v0 = self.vertices[0]
        return [[a - b for a, b in zip(v, v0)] for v in self.vertices[1:]]


@dataclass(frozen=True)
class VolumeProfile:
    entries: tuple  # ((m, Fraction), ...) with m descending

    def as_dict(self) -> dict:
        return dict(self.entries)


def _require_height_one(S: PolyhedralSet):
    if S.height != 1:
        raise UnsupportedError("volumes need rational (height 1) constants")


def _as_simplex(s) -> Simplex:
    if isinstance(s, Simplex):
        return s
    return Simplex(tuple(tuple(_rat(x) for x in v) for v in s))


def _rat(x) -> Fraction:
    if isinstance(x, GroupElement):
        if x.height != 1:
            raise UnsupportedError("volumes need rational (height 1) constants")
        return x.comps[0]
    return Fraction(x)


def simplex_vol(s) -> Fraction:
    """|det C| / n! where the edge matrix is C times a basis of the saturated lattice."""
    s = _as_simplex(s)
    n = s.dim
    if n <= 0:
        return Fraction(1) if n == 0 else Fraction(0)
    E = s.edges()
    if rank(E) < n:
        return Fraction(0)
    C, _ = saturated_basis(E)
    return abs(det(C)) / factorial(n)


# --------------------------------------------------------------------------
# triangulation


def _vertices(P: Polyhedron) -> list:
    """Vertices of the closure of a bounded polyhedron, by exact n-subsets of tight constraints."""
    n = P.dim
    cons = P.closure().constraints
    rows = [(list(c.affine.coeffs), -c.affine.const.comps[0]) for c in cons]
    found = {}
    for idx in combinations(range(len(rows)), n):
        A = [rows[i][0] for i in idx]
        if det(A) == 0:
            continue
        Ai = inverse(A)
        x = tuple(sum((Ai[r][k] * rows[idx[k]][1] for k in range(n)), Fraction(0)) for r in range(n))
        pt = tuple(GroupElement._raw((v,)) for v in x)
        if all(c.holds(pt) for c in cons):
            found.setdefault(x, None)
    return list(found)


def _affine_dim(pts) -> int:
    if not pts:
        return -1
    p0 = pts[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in pts[1:]]) if len(pts) > 1 else 0


def _pulling(P: Polyhedron, d: int, key) -> list:
    """Pulling triangulation of the closure of a bounded d-dimensional polyhedron.

    Each face is coned from its ``key``-least vertex over the facets that avoid it.
    """
    V = _vertices(P)
    if P.dim == 0:
        return [((),)]
    tight = []
    for c in P.closure().constraints:
        T = frozenset(i for i, v in enumerate(V) if not c.affine([GroupElement._raw((x,)) for x in v]).comps[0])
        tight.append(T)
    dims = {}

    def fdim(F):
        if F not in dims:
            dims[F] = _affine_dim([V[i] for i in sorted(F)])
        return dims[F]

    def rec(F, k):
        v0 = min(F, key=lambda i: key(V[i]))
        if k == 0:
            return [(v0,)]
        facets = {F & T for T in tight}
        out = []
        for G in facets:
            if v0 not in G and G != F and fdim(G) == k - 1:
                out.extend((v0,) + s for s in rec(G, k - 1))
        return out

    return [tuple(V[i] for i in s) for s in rec(frozenset(range(len(V))), d)]


def triangulate(S, order: Sequence[int] | None = None, dim: int | None = None,
                method: str = "pulling") -> list:
    """Simplices of dimension ``dim`` (default: dim S) covering the top-dimensional part of S.

    ``method`` is "pulling" (cone each face from its least vertex) or
    "cylindrical" (staircase simplices over cylindrical cells).  ``order``
    permutes the coordinates used to rank vertices or to stack cells, so each
    order gives a genuinely different triangulation of the same set.
    """
    S = as_set(S)
    _require_height_one(S)
    if not is_bounded(S):
        raise PreconditionError("triangulate needs a bounded set")
    if method not in ("pulling", "cylindrical"):
        raise ValueError(f"unknown triangulation method {method!r}")
    d = dimension(S) if dim is None else dim
    if d < 0:
        return []
    perm = list(range(S.dim)) if order is None else list(order)
    key = lambda v: tuple(v[j] for j in perm)
    out = []
    for P in _disjoint_parts(S):
        if polyhedron_dimension(P) != d:
            continue
        if method == "pulling":
            out.extend(Simplex(s) for s in _pulling(P, d, key))
            continue
        for cell in _decompose_ordered(PolyhedralSet(S.dim, [P], S.height), order):
            if cell.dim == d:
                out.extend(Simplex(_unpermute(s, order)) for s in _cell_simplices(cell))
    return out


def _cell_simplices(cell: Cell) -> list:
    """Simplices (vertex tuples) covering the closure of a bounded cell."""
    if cell.base is None:
        return [((),)]
    out = []
    for base in _cell_simplices(cell.base):
        pts = [tuple(GroupElement._raw((c,)) for c in v) for v in base]
        val = lambda f, p: f(p).comps[0]
        if cell.kind == "graph":
            out.append(tuple(v + (val(cell.fn, p),) for v, p in zip(base, pts)))
            continue
        if cell.lower is None or cell.upper is None:
            raise PreconditionError("cannot triangulate an unbounded cell")
        bottom = [v + (val(cell.lower, p),) for v, p in zip(base, pts)]
        top = [v + (val(cell.upper, p),) for v, p in zip(base, pts)]
        for j in range(len(base)):
            out.append(tuple(bottom[: j + 1] + top[j:]))
    return out


def _decompose_ordered(S: PolyhedralSet, order):
    """Cells of S with coordinates processed in ``order`` (cells live in permuted space)."""
    n = S.dim
    if order is None:
        return linear_decomposition(S)
    # y[i] = x[order[i]], i.e. x = P y
    P = [[Fraction(0)] * n for _ in range(n)]
    for i, j in enumerate(order):
        P[j][i] = Fraction(1)
    zero = [GroupElement.zero(S.height)] * n
    return linear_decomposition(S.pullback(P, zero, n))


def _unpermute(simplex, order):
    if order is None:
        return simplex
    out = []
    for v in simplex:
        x = [None] * len(v)
        for i, j in enumerate(order):
            x[j] = v[i]
        out.append(tuple(x))
    return tuple(out)


def _disjoint_parts(S: PolyhedralSet) -> list:
    """Pairwise disjoint polyhedra with union S; each is decomposed on its own."""
    out = []
    for k, P in enumerate(S.parts):
        frags = [P] if feasible(P) else []
        for Q in S.parts[:k]:
            frags = [r for f in frags for r in subtract_polyhedron(f, Q)]
        out.extend(frags)
    return out


def vol_n(S, n: int, order: Sequence[int] | None = None, method: str = "pulling") -> Fraction:
    """n-dimensional lattice volume of a bounded set of dimension at most n."""
    S = as_set(S)
    _require_height_one(S)
    d = dimension(S)
    if d > n:
        raise DimensionMismatchError(f"set has dimension {d} > {n}")
    if d < n:
        return Fraction(0)
    vols = ordered_map(simplex_vol, triangulate(S, order, n, method))
    return sum(vols, Fraction(0))


def vol_profile(S) -> VolumeProfile:
    """m-dimensional volume of the part of S of local dimension exactly m, for each m."""
    S = as_set(S)
    _require_height_one(S)
    if not is_bounded(S):
        raise PreconditionError("vol_profile needs a bounded set")
    cells = linear_decomposition(S)
    if not cells:
        return VolumeProfile(())
    top = max(c.dim for c in cells)
    entries = []
    for m in range(top, -1, -1):
        higher = PolyhedralSet(S.dim, [c.closure() for c in cells if c.dim > m], S.height)
        locus = subtract(S, higher) if higher.parts else S
        if dimension(locus) != m:
            continue
        entries.append((m, vol_n(locus, m)))
    return VolumeProfile(tuple(entries))


# --------------------------------------------------------------------------
# unimodular maps


def unimodular_transform(S, pieces) -> PolyhedralSet:
    """Image of S under x -> U x + a on each piece (P, U, a); pieces must partition S."""
    S = as_set(S)
    n, h = S.dim, S.height
    images = []
    domain = []
    for P, U, a in pieces:
        U = [[Fraction(x) for x in row] for row in U]
        if len(U) != n or any(len(r) != n for r in U):
            raise DimensionMismatchError("matrix size does not match the set")
        if any(x.denominator != 1 for r in U for x in r) or abs(det(U)) != 1:
            raise PreconditionError("matrix is not in GL_N(Z)", witness=U)
        shift = [x if isinstance(x, GroupElement) else GroupElement.of(x, h) for x in a]
        Ui = inverse(U)
        # y = U x + a  <=>  x = Ui y - Ui a
        offsets = [GroupElement.zero(h)] * n
        for i in range(n):
            acc = GroupElement.zero(h)
            for j in range(n):
                if Ui[i][j]:
                    acc = acc - shift[j].scale(Ui[i][j])
            offsets[i] = acc
        P = P if isinstance(P, Polyhedron) else as_set(P)
        for part in as_set(P).parts:
            domain.append(part)
            images.append(part.pullback(Ui, offsets, n))
    dom = PolyhedralSet(n, domain, h)
    if not set_equal(dom, S):
        raise PreconditionError("pieces do not cover S exactly")
    for i in range(len(domain)):
        for j in range(i + 1, len(domain)):
            x = find_point(domain[i] & domain[j])
            if x is not None:
                raise PreconditionError("pieces overlap", witness=x)
            y = find_point(images[i] & images[j])
            if y is not None:
                raise PreconditionError("images overlap", witness=y)
    return PolyhedralSet(n, images, h)
