"""Cylindrical linear cell decompositions of bounded polyhedral sets.

Cells are built by recursion on the last coordinate: project, decompose the
base, then slice each base cell by the sorted boundary functions.  The slicing
functions are global (every boundary function of the level is used over every
base cell and all their pairwise differences are pushed to the base), which is
what makes the result special.  :func:`verify_special` re-checks the three
compatibility conditions independently of the constructor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .errors import CapExhaustedError, PreconditionError, VerificationError
from .group import AffineFunction, GroupElement
from .polyhedra import (
    EQ, LE, LT, LinearConstraint, Polyhedron, PolyhedralSet, as_set, feasible, find_point,
    is_bounded, is_subset, project, set_equal,
)


def _canon_fn(f: AffineFunction):
    """Sign-insensitive canonical representative (first nonzero slope 1), or None if constant."""
    for c in f.coeffs:
        if c:
            return f.scale(1 / c) if c != 1 else f
    return None


class Cell:
    """A bounded linear cell: the origin of Gamma^0, a graph, or a relative interval."""

    __slots__ = ("kind", "base", "lower", "upper", "ambient", "height", "_poly", "_sample", "_key", "_hash")

    def __init__(self, kind: str, base: "Cell | None", lower=None, upper=None, height: int = 1):
        if kind not in ("point", "graph", "interval"):
            raise ValueError(f"unknown cell kind {kind!r}")
        self.kind = kind
        self.base = base
        self.lower = lower
        self.upper = upper
        self.ambient = 0 if base is None else base.ambient + 1
        self.height = height if base is None else base.height
        self._poly = None
        self._sample = None
        self._key = None
        self._hash = None

    @property
    def dim(self) -> int:
        if self.base is None:
            return 0
        return self.base.dim + (1 if self.kind == "interval" else 0)

    @property
    def fn(self) -> AffineFunction:
        """The defining function of a graph cell."""
        return self.lower

    def bounds(self) -> list:
        """Functions bounding the last coordinate (graph function or interval ends)."""
        if self.kind == "graph":
            return [self.lower]
        return [f for f in (self.lower, self.upper) if f is not None]

    def polyhedron(self) -> Polyhedron:
        if self._poly is None:
            self._poly = self._build()
        return self._poly

    def _build(self) -> Polyhedron:
        if self.base is None:
            return Polyhedron(0, (), self.height)
        n = self.ambient
        base = self.base.polyhedron().embed(n, range(n - 1))
        xn = AffineFunction.coordinate(n - 1, n, self.height)
        up = lambda f: f.embed(n, range(n - 1))
        if self.kind == "graph":
            return base.intersect(LinearConstraint(xn - up(self.lower), EQ))
        cons = []
        if self.lower is not None:
            cons.append(LinearConstraint(up(self.lower) - xn, LT))
        if self.upper is not None:
            cons.append(LinearConstraint(xn - up(self.upper), LT))
        return base.intersect(cons)

    def closure(self) -> Polyhedron:
        return self.polyhedron().closure()

    def sample(self) -> tuple:
        if self._sample is None:
            if self.base is None:
                self._sample = ()
            else:
                s = self.base.sample()
                one = GroupElement.unit(self.height)
                if self.kind == "graph":
                    y = self.lower(s)
                elif self.lower is not None and self.upper is not None:
                    y = (self.lower(s) + self.upper(s)).scale(Fraction(1, 2))
                elif self.lower is not None:
                    y = self.lower(s) + one
                elif self.upper is not None:
                    y = self.upper(s) - one
                else:
                    y = GroupElement.zero(self.height)
                self._sample = s + (y,)
        return self._sample

    def key(self):
        if self._key is None:
            b = () if self.base is None else self.base.key()
            f = lambda a: None if a is None else a.sort_key()
            self._key = b + ((self.kind, f(self.lower), f(self.upper)),)
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Cell) and hash(self) == hash(other) and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self):
        if self.base is None:
            return "Cell(point)"
        if self.kind == "graph":
            return f"Cell(graph {self.lower!r} over {self.base!r})"
        return f"Cell(({self.lower!r}, {self.upper!r}) over {self.base!r})"


def _split_functions(fns, n):
    """Roots (solved for the last variable) and base functions (last variable absent)."""
    roots, base = {}, {}
    for f in fns:
        a = f.coeffs[n - 1]
        if a:
            rest = AffineFunction._raw(f.coeffs[: n - 1], f.const)
            phi = rest.scale(-1 / a)
            roots.setdefault(phi, None)
        else:
            c = _canon_fn(AffineFunction._raw(f.coeffs[: n - 1], f.const))
            if c is not None:
                base.setdefault(c, None)
    return sorted(roots, key=AffineFunction.sort_key), base


def _changes_sign(Q: Polyhedron, f: AffineFunction) -> bool:
    signs = 0
    for c in (LinearConstraint(f, LT), LinearConstraint(f, EQ), LinearConstraint(-f, LT)):
        signs += feasible(Q.intersect(c))
        if signs > 1:
            return True
    return False


def _decompose(S: PolyhedralSet, fns: list) -> list:
    n = S.dim
    h = S.height
    if n == 0:
        return [Cell("point", None, height=h)] if any(feasible(P) for P in S.parts) else []
    parts = [P for P in S.parts if feasible(P)]
    if not parts:
        return []
    allfns = list(fns)
    for P in parts:
        allfns.extend(c.affine for c in P.constraints)
    roots, base = _split_functions(allfns, n)
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            c = _canon_fn(roots[i] - roots[j])
            if c is not None:
                base.setdefault(c, None)
    proj = [project(P, range(n - 1)) for P in parts]
    for Q in proj:
        for c in Q.constraints:
            d = _canon_fn(c.affine)
            if d is not None:
                base.setdefault(d, None)
    # a function of constant sign on every projected part cannot split a base cell
    base = [f for f in base if any(_changes_sign(Q, f) for Q in proj)]
    base_set = PolyhedralSet(n - 1, proj, h)
    base_cells = _decompose(base_set, sorted(base, key=AffineFunction.sort_key))
    out = []
    for C in base_cells:
        s = C.sample()
        levels: dict = {}
        for phi in roots:
            levels.setdefault(phi(s), []).append(phi)
        ordered = [min(levels[v], key=AffineFunction.sort_key) for v in sorted(levels)]
        candidates = []
        prev = None
        for phi in ordered:
            candidates.append(Cell("interval", C, prev, phi))
            candidates.append(Cell("graph", C, phi))
            prev = phi
        candidates.append(Cell("interval", C, prev, None))
        for cell in candidates:
            if S.contains(cell.sample()):
                out.append(cell)
    return out


def linear_decomposition(S, fns: Sequence[AffineFunction] = (), pairwise: bool = True) -> list:
    """Cells partitioning the bounded set S on which every fn has constant sign.

    With ``pairwise`` (the default) every difference of two fns has constant
    sign too; without it only the fns themselves are respected, which gives far
    fewer cells when the caller just needs the fns' sign pattern.
    "Constant sign" of f - g on a cell is read as exactly one of f < g,
    f > g or f = g holding throughout it.
    """
    S = as_set(S)
    if not is_bounded(S):
        raise PreconditionError("linear_decomposition needs a bounded set")
    fl = list(dict.fromkeys(f for f in (_canon_fn(f) for f in fns) if f is not None))
    extra = []
    if pairwise:
        for i in range(len(fl)):
            for j in range(i + 1, len(fl)):
                extra.append(fl[i] - fl[j])
    return _decompose(S, fl + extra)


@dataclass(frozen=True)
class SpecialDecomposition:
    dim: int
    cells: tuple
    target: PolyhedralSet


def _cells_set(cells, n, h) -> PolyhedralSet:
    return PolyhedralSet(n, [c.polyhedron() for c in cells], h)


def verify_special(cells: Sequence[Cell], target=None):
    """Independent check of partition and the three special conditions.

    Returns None when everything holds, else a description of the first failure.
    """
    cells = list(cells)
    if not cells:
        return None
    n, h = cells[0].ambient, cells[0].height
    polys = [c.polyhedron() for c in cells]
    for i in range(len(cells)):
        if not feasible(polys[i]):
            return ("empty cell", cells[i])
    bases = list(dict.fromkeys(c.base for c in cells))
    if n >= 1:
        # cells over distinct bases are disjoint once the bases are (checked below)
        bad = verify_special(bases, None) if n > 1 else None
        if bad is not None:
            return ("projection",) + bad
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if cells[i].base == cells[j].base and feasible(polys[i] & polys[j]):
                return ("overlap", cells[i], cells[j])
    if target is not None and not set_equal(_cells_set(cells, n, h), target):
        return ("cover", None)
    if n <= 1:
        return None
    closure = {b: b.closure() for b in bases}
    inside: dict = {}
    meet: dict = {}

    def base_inside(S, T):
        key = (S, T)
        if key not in inside:
            inside[key] = closure[T].contains(S.sample()) and is_subset(S.polyhedron(), closure[T])
        return inside[key]

    def base_meet(S, T):
        key = (S, T) if hash(S) <= hash(T) else (T, S)
        if key not in meet:
            common = closure[S] & closure[T]
            meet[key] = common if feasible(common) else None
        return meet[key]

    sign_cache: dict = {}
    region_cache: dict = {}
    for c in cells:
        for d in cells:
            if c is d:
                continue
            S, T = c.base, d.base
            # condition (2): graph cells over S in the closure of T
            if c.kind == "graph" and d.kind == "graph" and base_inside(S, T):
                key = (S, c.fn, d.fn)
                if key not in sign_cache:
                    f, g = c.fn, d.fn
                    P = S.polyhedron()
                    sign_cache[key] = sum(feasible(P.intersect(LinearConstraint(a, r)))
                                          for a, r in ((f - g, LT), (g - f, LT), (f - g, EQ)))
                if sign_cache[key] > 1:
                    return ("condition 2", c, d)
            # condition (3): interval (f, g)_T against any function h bounding a cell over S
            if d.kind == "interval" and d.lower is not None and d.upper is not None:
                common = base_meet(S, T)
                if common is None:
                    continue
                for hf in c.bounds():
                    key = (S, T, d.lower, d.upper, hf)
                    if key not in region_cache:
                        region = common.intersect([LinearConstraint(d.lower - hf, LT),
                                                   LinearConstraint(hf - d.upper, LT)])
                        region_cache[key] = feasible(region)
                    if region_cache[key]:
                        return ("condition 3", d, c)
    return None


def make_special(cells: Sequence[Cell], cap: int = 20) -> SpecialDecomposition:
    """Verify the special conditions, refining by global slicing if they fail."""
    cells = list(cells)
    if not cells:
        raise PreconditionError("empty decomposition")
    n, h = cells[0].ambient, cells[0].height
    target = _cells_set(cells, n, h)
    if verify_special(cells) is None:
        return SpecialDecomposition(n, tuple(cells), target)
    fns = []
    for c in cells:
        for p in c.polyhedron().constraints:
            fns.append(p.affine)
    refined = _decompose(target, fns)
    bad = verify_special(refined, target)
    if bad is not None:
        raise VerificationError("special refinement failed verification", bad)
    return SpecialDecomposition(n, tuple(refined), target)


@dataclass(frozen=True)
class ClosedCell:
    """Closure of a maximal cell."""

    cell: Cell
    polyhedron: Polyhedron

    def as_set(self) -> PolyhedralSet:
        return as_set(self.polyhedron)


def closed_cells(D: SpecialDecomposition) -> list:
    cells = list(D.cells)
    closures = [c.closure() for c in cells]
    out = []
    for i, c in enumerate(cells):
        s = c.sample()
        maximal = True
        for j, d in enumerate(cells):
            if i == j or d.dim <= c.dim or not closures[j].contains(s):
                continue
            if is_subset(c.polyhedron(), closures[j]):
                maximal = False
                break
        if maximal:
            out.append(ClosedCell(c, closures[i]))
    return out


# --------------------------------------------------------------------------
# separation


@dataclass(frozen=True)
class SeparationCertificate:
    """H - a >= 0 on ``first`` and <= 0 on ``second``; both meet {H = a} exactly in their intersection."""

    H: AffineFunction
    a: GroupElement
    first: Polyhedron
    second: Polyhedron

    @property
    def level(self) -> AffineFunction:
        return self.H - self.a


def verify_separation(cert: SeparationCertificate) -> bool:
    H, a, A, B = cert.H, cert.a, cert.first, cert.second
    if not H.is_z_affine() or not H.const.is_zero():
        return False
    L = H - a
    if feasible(A.intersect(LinearConstraint(L, LT))):
        return False
    if feasible(B.intersect(LinearConstraint(-L, LT))):
        return False
    onA = A.intersect(LinearConstraint(L, EQ))
    onB = B.intersect(LinearConstraint(L, EQ))
    return is_subset(onA, B) and is_subset(onB, A)


def range_of(P: Polyhedron, f: AffineFunction):
    """(lo, hi) of f over a nonempty bounded closed polyhedron."""
    n = P.dim
    t = AffineFunction.coordinate(n, n + 1, P.height)
    lifted = P.embed(n + 1, range(n)).intersect(LinearConstraint(t - f.embed(n + 1, range(n)), EQ))
    line = project(lifted, [n])
    lo = hi = None
    for c in line.constraints:
        m = c.affine.coeffs[0]
        if not m:
            continue
        b = -c.affine.const / m
        if c.rel == EQ:
            return b, b
        if m > 0:
            hi = b if hi is None or b < hi else hi
        else:
            lo = b if lo is None or b > lo else lo
    return lo, hi


def _integer_direction(coeffs) -> tuple | None:
    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        return None
    return tuple(Fraction(v // g) for v in ints)


def _try_direction(coeffs, A: Polyhedron, B: Polyhedron, meet):
    d = _integer_direction(coeffs)
    if d is None:
        return None
    h = A.height
    for sgn in (1, -1):
        H = AffineFunction._raw(tuple(sgn * c for c in d), GroupElement.zero(h))
        if meet is not None:
            a = H(meet)
        else:
            loA, _ = range_of(A, H)
            _, hiB = range_of(B, H)
            if loA is None or hiB is None or not hiB < loA:
                continue
            a = (loA + hiB).scale(Fraction(1, 2))
        cert = SeparationCertificate(H, a, A, B)
        if verify_separation(cert):
            return cert
    return None


def _proof_directions(A: Cell, B: Cell, cap: int):
    """Candidate slope vectors following the inductive construction."""
    n = A.ambient
    if n == 0:
        return
    zero_last = lambda f: tuple(-c for c in f.coeffs) + (Fraction(1),)
    if A.base == B.base:
        sa, sb = A.sample()[-1], B.sample()[-1]
        low, high = (B, A) if sb < sa else (A, B)
        lo_fn = low.fn if low.kind == "graph" else low.upper
        hi_fn = high.fn if high.kind == "graph" else high.lower
        if lo_fn is not None and hi_fn is not None:
            yield zero_last((lo_fn + hi_fn).scale(Fraction(1, 2)))
    base_dirs = list(_proof_directions(A.base, B.base, cap))
    for d in base_dirs:
        yield tuple(d) + (Fraction(0),)
    phis = list(dict.fromkeys(A.bounds() + B.bounds()))
    avgs = [(p + q).scale(Fraction(1, 2)) for i, p in enumerate(phis) for q in phis[i + 1:]]
    for k in range(cap + 1):
        N = 1 << k
        for d in base_dirs:
            for phi in phis + avgs:
                v = zero_last(phi)
                yield tuple(N * x + y for x, y in zip(tuple(d) + (Fraction(0),), v))
                yield tuple(N * x - y for x, y in zip(tuple(d) + (Fraction(0),), v))


def _normal_directions(A: Polyhedron, B: Polyhedron, cap: int):
    normals = []
    for P in (A, B):
        for c in P.constraints:
            d = _integer_direction(c.affine.coeffs)
            if d is not None and d not in normals:
                normals.append(d)
    yield from normals
    for k in range(cap + 1):
        N = 1 << k
        for u in normals:
            for v in normals:
                if u != v:
                    yield tuple(N * a + b for a, b in zip(u, v))


def separating_hyperplane(A: ClosedCell, B: ClosedCell, cap: int = 20, budget: int = 4000) -> SeparationCertificate:
    """Verified integer hyperplane with A on its non-negative side and B on the other."""
    PA, PB = A.polyhedron, B.polyhedron
    inter = PA & PB
    meet = find_point(inter)
    tried = 0
    seen = set()
    sources = [_proof_directions(A.cell, B.cell, cap), _normal_directions(PA, PB, cap)]
    for src in sources:
        for d in src:
            key = _integer_direction(d)
            if key is None or key in seen:
                continue
            seen.add(key)
            tried += 1
            cert = _try_direction(key, PA, PB, meet)
            if cert is not None:
                return cert
            if tried >= budget:
                break
    raise CapExhaustedError("cap exhausted: no separating hyperplane found", last_tried=tried)


# --------------------------------------------------------------------------
# separating functions


@dataclass(frozen=True)
class SeparatingFunction:
    """An affine function e with g <= e on the first cell and e <= g on the second.

    ``form`` records the construction: ("own", None), ("other", None),
    ("shift", m) for G' + m L or ("slab", (k, b)) for k L + b, where L = H - a.
    """

    fn: AffineFunction
    form: tuple
    cert: SeparationCertificate | None


def holds_star(e: AffineFunction, first: Polyhedron, G1: AffineFunction,
               second: Polyhedron, G2: AffineFunction) -> bool:
    """g <= e on ``first`` (where g = G1) and e <= g on ``second`` (where g = G2)."""
    if feasible(first.intersect(LinearConstraint(e - G1, LT))):
        return False
    return not feasible(second.intersect(LinearConstraint(G2 - e, LT)))


def _bound_in_smallest_subgroup(cells_and_fns, height: int, cap: int) -> GroupElement:
    unit = GroupElement.unit(height, height - 1)
    for k in range(cap + 1):
        b = unit.scale(1 << k)
        ok = True
        for P, G in cells_and_fns:
            bf = AffineFunction._raw((Fraction(0),) * P.dim, b)
            if feasible(P.intersect(LinearConstraint(bf - G, LE))) or \
               feasible(P.intersect(LinearConstraint(G + bf, LE))):
                ok = False
                break
        if ok:
            return b
    raise CapExhaustedError("cap exhausted bounding g in the smallest convex subgroup", last_tried=1 << cap)


def build_separating_function(A: ClosedCell, GA: AffineFunction, B: ClosedCell, GB: AffineFunction,
                              cap: int = 20, cert=None) -> SeparatingFunction:
    """Construct e with g <= e on A and e <= g on B, where g = GA on A and g = GB on B.

    ``cert`` may be a ready certificate or a zero-argument callable producing
    one; it is only consulted when neither GA nor GB already works.
    """
    PA, PB = A.polyhedron, B.polyhedron
    if holds_star(GA, PA, GA, PB, GB):
        return SeparatingFunction(GA, ("own", None), None)
    if holds_star(GB, PA, GA, PB, GB):
        return SeparatingFunction(GB, ("other", None), None)
    if cert is None:
        cert = separating_hyperplane(A, B, cap)
    elif callable(cert):
        cert = cert()
    L = cert.level
    if feasible(PA & PB):
        for k in range(cap + 1):
            m = 1 << k
            e = GA + L.scale(m)
            if holds_star(e, PA, GA, PB, GB):
                return SeparatingFunction(e, ("shift", m), cert)
        raise CapExhaustedError("cap exhausted searching the multiplier m", last_tried=1 << cap)
    b = _bound_in_smallest_subgroup([(PA, GA), (PB, GB)], GA.height, cap)
    bf = AffineFunction._raw((Fraction(0),) * PA.dim, b)
    for k in [0] + [1 << j for j in range(cap + 1)]:
        e = L.scale(k) + bf
        if holds_star(e, PA, GA, PB, GB):
            return SeparatingFunction(e, ("slab", (k, b)), cert)
    raise CapExhaustedError("cap exhausted searching the slope k", last_tried=1 << cap)


def separating_function(Dp: ClosedCell, Dpp: ClosedCell, g, gens: Sequence[AffineFunction], cap: int = 20):
    """Separating function for a PwaFunction g that is affine on both cells.

    Returns a :class:`SeparatingFunction`; raises PreconditionError when g is not
    affine on a cell or its values are not in the smallest convex subgroup.
    """
    GA = _affine_on(g, Dp.polyhedron)
    GB = _affine_on(g, Dpp.polyhedron)
    h = g.height
    if h > 1:
        for P, G in ((Dp.polyhedron, GA), (Dpp.polyhedron, GB)):
            Gq = G.quotient(h - 1)
            Pq = P.quotient(h - 1)
            for rel_f in (Gq, -Gq):
                if feasible(Pq.intersect(LinearConstraint(-rel_f, LT))):
                    raise PreconditionError("g has values outside the smallest convex subgroup")
    return build_separating_function(Dp, GA, Dpp, GB, cap)


def _affine_on(g, P: Polyhedron) -> AffineFunction:
    from .pwa import PwaFunction, pwa_equal_on
    target = g.restrict(P)
    for f in g.affines():
        ok, _ = pwa_equal_on(target, PwaFunction.affine(f, P))
        if ok:
            return f
    raise PreconditionError("g is not affine on the cell", witness=P)
