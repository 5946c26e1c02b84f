"""Lattice terms over {+, -, min, max} and their min-of-max normal forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DimensionMismatchError
from .group import AffineFunction, GroupElement
from .polyhedra import LE, LT, LinearConstraint, PolyhedralSet, as_set, feasible, find_point
from .pwa import PwaFunction, pwa_equal_on


class LatticeTerm:
    """Base class of term nodes.  Nodes are frozen dataclasses."""

    __slots__ = ()

    def __add__(self, other):
        return Add(self, other)

    def __sub__(self, other):
        return Add(self, Neg(other))

    def __neg__(self):
        return Neg(self)


@dataclass(frozen=True)
class Const(LatticeTerm):
    value: GroupElement


@dataclass(frozen=True)
class Coord(LatticeTerm):
    index: int


@dataclass(frozen=True)
class Gen(LatticeTerm):
    index: int


@dataclass(frozen=True)
class Neg(LatticeTerm):
    arg: LatticeTerm


@dataclass(frozen=True)
class Add(LatticeTerm):
    left: LatticeTerm
    right: LatticeTerm


@dataclass(frozen=True)
class Min(LatticeTerm):
    left: LatticeTerm
    right: LatticeTerm


@dataclass(frozen=True)
class Max(LatticeTerm):
    left: LatticeTerm
    right: LatticeTerm


@dataclass(frozen=True)
class IntScale(LatticeTerm):
    k: int
    arg: LatticeTerm


def _fold(cls, terms):
    terms = list(terms)
    if not terms:
        raise ValueError("empty fold")
    out = terms[0]
    for t in terms[1:]:
        out = cls(out, t)
    return out


def min_of(terms) -> LatticeTerm:
    return _fold(Min, terms)


def max_of(terms) -> LatticeTerm:
    return _fold(Max, terms)


def sum_of(terms) -> LatticeTerm:
    return _fold(Add, terms)


def abs_term(t: LatticeTerm) -> LatticeTerm:
    return Max(t, Neg(t))


def children(t: LatticeTerm) -> tuple:
    if isinstance(t, (Neg, IntScale)):
        return (t.arg,)
    if isinstance(t, (Add, Min, Max)):
        return (t.left, t.right)
    return ()


def eval_term(t: LatticeTerm, x: Sequence[GroupElement], gens: Sequence = ()) -> GroupElement:
    """Exact value of ``t`` at ``x``; ``gens[j]`` may be any callable on points."""
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Coord):
        if not 0 <= t.index < len(x):
            raise IndexError(f"coordinate {t.index} out of range")
        return x[t.index]
    if isinstance(t, Gen):
        if not 0 <= t.index < len(gens):
            raise IndexError(f"generator {t.index} out of range")
        return gens[t.index](x)
    if isinstance(t, Neg):
        return -eval_term(t.arg, x, gens)
    if isinstance(t, IntScale):
        return eval_term(t.arg, x, gens).scale(t.k)
    a = eval_term(t.left, x, gens)
    b = eval_term(t.right, x, gens)
    if isinstance(t, Add):
        return a + b
    if isinstance(t, Min):
        return a if a <= b else b
    if isinstance(t, Max):
        return a if a >= b else b
    raise TypeError(f"unknown term node {type(t).__name__}")


def format_term(t: LatticeTerm, gen_names: Sequence[str] | None = None) -> str:
    """Infix rendering: ``min(f0, x1 + (-3/2))``; generators print as f<i> unless named."""
    if isinstance(t, Const):
        return repr(t.value)
    if isinstance(t, Coord):
        return f"x{t.index}"
    if isinstance(t, Gen):
        return gen_names[t.index] if gen_names else f"f{t.index}"
    if isinstance(t, Neg):
        return f"-{_wrap(t.arg, gen_names)}"
    if isinstance(t, IntScale):
        return f"{t.k}*{_wrap(t.arg, gen_names)}"
    if isinstance(t, Add):
        return f"{format_term(t.left, gen_names)} + {format_term(t.right, gen_names)}"
    name = "min" if isinstance(t, Min) else "max"
    args = [format_term(a, gen_names) for a in _flat(t, type(t))]
    return f"{name}({', '.join(args)})"


def _wrap(t, gen_names):
    s = format_term(t, gen_names)
    return f"({s})" if isinstance(t, Add) else s


def transform(t: LatticeTerm, leaf: Callable[[LatticeTerm], LatticeTerm]) -> LatticeTerm:
    """Rebuild ``t`` bottom-up, replacing every leaf by ``leaf(node)``."""
    if isinstance(t, (Const, Coord, Gen)):
        return leaf(t)
    if isinstance(t, Neg):
        return Neg(transform(t.arg, leaf))
    if isinstance(t, IntScale):
        return IntScale(t.k, transform(t.arg, leaf))
    return type(t)(transform(t.left, leaf), transform(t.right, leaf))


def substitute_gens(t: LatticeTerm, mapping: Sequence[LatticeTerm]) -> LatticeTerm:
    return transform(t, lambda n: mapping[n.index] if isinstance(n, Gen) else n)


def map_constants(t: LatticeTerm, fn: Callable[[GroupElement], LatticeTerm]) -> LatticeTerm:
    return transform(t, lambda n: fn(n.value) if isinstance(n, Const) else n)


def constants_of(t: LatticeTerm) -> list:
    out = []

    def walk(n):
        if isinstance(n, Const):
            out.append(n.value)
        for c in children(n):
            walk(c)

    walk(t)
    return out


def term_size(t: LatticeTerm) -> int:
    return 1 + sum(term_size(c) for c in children(t))


def leaf_affine(t: LatticeTerm, gens: Sequence[AffineFunction], dim: int, height: int) -> AffineFunction:
    if isinstance(t, Const):
        if t.value.height != height:
            raise DimensionMismatchError("constant of the wrong height")
        return AffineFunction._raw((Fraction(0),) * dim, t.value)
    if isinstance(t, Coord):
        if not 0 <= t.index < dim:
            raise IndexError(f"coordinate {t.index} out of range")
        return AffineFunction.coordinate(t.index, dim, height)
    if isinstance(t, Gen):
        if not 0 <= t.index < len(gens):
            raise IndexError(f"generator {t.index} out of range")
        return gens[t.index]
    raise TypeError("not a leaf")


def affine_as_term(f: AffineFunction) -> LatticeTerm:
    """Integer-slope affine function written with Coord, IntScale and Const."""
    if not f.is_z_affine():
        raise ValueError("only integer slopes are expressible with + and -")
    parts = []
    for i, c in enumerate(f.coeffs):
        if c == 1:
            parts.append(Coord(i))
        elif c:
            parts.append(IntScale(int(c), Coord(i)))
    if not f.const.is_zero() or not parts:
        parts.append(Const(f.const))
    return sum_of(parts)


# --------------------------------------------------------------------------
# simplification (value preserving, syntactic only)


def _flat(t, cls):
    if isinstance(t, cls):
        return _flat(t.left, cls) + _flat(t.right, cls)
    return [t]


def simplify(t: LatticeTerm) -> LatticeTerm:
    """Flatten, deduplicate min/max arguments and drop zero constants."""
    if isinstance(t, (Const, Coord, Gen)):
        return t
    if isinstance(t, Neg):
        a = simplify(t.arg)
        if isinstance(a, Neg):
            return a.arg
        if isinstance(a, Const):
            return Const(-a.value)
        return Neg(a)
    if isinstance(t, IntScale):
        a = simplify(t.arg)
        if t.k == 1:
            return a
        if t.k == -1:
            return simplify(Neg(a))
        if isinstance(a, Const):
            return Const(a.value.scale(t.k))
        return IntScale(t.k, a)
    if isinstance(t, Add):
        args = [b for a in _flat(t, Add) for b in _flat(simplify(a), Add)]
        consts = [a.value for a in args if isinstance(a, Const)]
        rest = []
        for a in args:
            if isinstance(a, Const):
                continue
            opp = a.arg if isinstance(a, Neg) else Neg(a)
            if opp in rest:
                rest.remove(opp)
            else:
                rest.append(a)
        if consts:
            total = consts[0]
            for c in consts[1:]:
                total = total + c
            if not total.is_zero() or not rest:
                rest.append(Const(total))
        if not rest:
            return args[0] if len(args) == 1 else Add(args[0], args[1])
        return sum_of(rest)
    cls = type(t)
    args = []
    for a in _flat(t, cls):
        a = simplify(a)
        for b in (_flat(a, cls) if isinstance(a, cls) else [a]):
            if b not in args:
                args.append(b)
    return _fold(cls, args)


# --------------------------------------------------------------------------
# normal forms


@dataclass(frozen=True)
class MinMaxNormalForm:
    """min over clauses of max over each clause; ``prov`` maps affines to source terms."""

    dim: int
    height: int
    clauses: tuple
    prov: tuple = ()

    def __call__(self, x) -> GroupElement:
        best = None
        for clause in self.clauses:
            m = None
            for f in clause:
                v = f(x)
                if m is None or v > m:
                    m = v
            if best is None or m < best:
                best = m
        return best

    def affines(self) -> list:
        seen = {}
        for c in self.clauses:
            for f in c:
                seen.setdefault(f, None)
        return list(seen)

    def provenance(self) -> dict:
        return dict(self.prov)

    def as_term(self, index: dict | None = None) -> LatticeTerm:
        """Term over Gen(index[f]) (or over the provenance terms when no index is given)."""
        prov = self.provenance()
        leaf = (lambda f: Gen(index[f])) if index is not None else (lambda f: prov[f])
        return min_of(max_of(leaf(f) for f in c) for c in self.clauses)


def _clause_key(c):
    return (len(c), tuple(f.sort_key() for f in c))


def _prune(clauses) -> list:
    """Remove duplicates and clauses that contain another clause (absorption)."""
    uniq = {}
    for c in clauses:
        uniq.setdefault(frozenset(c), None)
    sets = sorted(uniq, key=len)
    kept = []
    for s in sets:
        if not any(k <= s for k in kept):
            kept.append(s)
    return [tuple(sorted(s, key=AffineFunction.sort_key)) for s in kept]


def _dual(clauses) -> list:
    """Rewrite a max-of-min (given as its clauses) as a min-of-max."""
    out = [frozenset()]
    for c in clauses:
        out = _prune_sets(frozenset(s | {f}) for s in out for f in c)
    return out


def _prune_sets(sets) -> list:
    uniq = sorted(set(sets), key=len)
    kept = []
    for s in uniq:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def normalize(t: LatticeTerm, gens: Sequence[AffineFunction] = (), dim: int | None = None,
              height: int | None = None) -> MinMaxNormalForm:
    """Pointwise-equal min-of-max of affine functions, with provenance terms."""
    if dim is None:
        dim = gens[0].dim if gens else _max_coord(t) + 1
    if height is None:
        height = _infer_height(t, gens)
    prov: dict = {}

    def note(f, term):
        prov.setdefault(f, term)
        return f

    def go(t):
        if isinstance(t, (Const, Coord, Gen)):
            f = leaf_affine(t, gens, dim, height)
            return [(note(f, t),)]
        if isinstance(t, IntScale):
            if t.k == 0:
                z = AffineFunction.zero(dim, height)
                return [(note(z, Const(z.const)),)]
            inner = go(t.arg) if t.k > 0 else go(Neg(t.arg))
            k = abs(t.k)
            if k == 1:
                return inner
            return [tuple(note(f.scale(k), IntScale(k, prov[f])) for f in c) for c in inner]
        if isinstance(t, Neg):
            inner = go(t.arg)
            negs = [tuple(note(-f, Neg(prov[f])) for f in c) for c in inner]
            # -min_C max_f f = max_C min_f (-f)
            return _prune([tuple(s) for s in _dual(negs)])
        a = go(t.left)
        b = go(t.right)
        if isinstance(t, Min):
            return _prune(a + b)
        if isinstance(t, Max):
            return _prune([tuple(set(ca) | set(cb)) for ca in a for cb in b])
        if isinstance(t, Add):
            out = []
            for ca in a:
                for cb in b:
                    out.append(tuple(note(p + q, Add(prov[p], prov[q])) for p in ca for q in cb))
            return _prune(out)
        raise TypeError(f"unknown term node {type(t).__name__}")

    clauses = sorted(go(t), key=_clause_key)
    used = {f for c in clauses for f in c}
    return MinMaxNormalForm(dim, height, tuple(clauses), tuple((f, p) for f, p in prov.items() if f in used))


def _max_coord(t) -> int:
    if isinstance(t, Coord):
        return t.index
    return max((_max_coord(c) for c in children(t)), default=-1)


def _infer_height(t, gens) -> int:
    if gens:
        return gens[0].height
    cs = constants_of(t)
    return cs[0].height if cs else 1


def normal_form_of_clauses(clauses, dim: int, height: int) -> MinMaxNormalForm:
    clauses = sorted(_prune([tuple(c) for c in clauses]), key=_clause_key)
    return MinMaxNormalForm(dim, height, tuple(clauses))


# --------------------------------------------------------------------------
# exact equality against piecewise-affine functions


def _nf_above(R, clauses, h):
    """A point of R where every clause has some member above h, or None."""
    if not clauses:
        return find_point(R)
    first, rest = clauses[0], clauses[1:]
    for f in first:
        S = R.intersect(LinearConstraint(h - f, LT))
        if feasible(S):
            pt = _nf_above(S, rest, h)
            if pt is not None:
                return pt
    return None


def term_equals_on(nf: MinMaxNormalForm, g: PwaFunction, D=None):
    """Decide nf == g on D; returns ``(True, None)`` or ``(False, (x, nf(x), g(x)))``."""
    D = g.domain if D is None else as_set(D)
    if nf.dim != g.dim or D.dim != g.dim:
        raise DimensionMismatchError("dimensions differ")
    for A in D.parts:
        if not feasible(A):
            continue
        for P, h in g.pieces:
            R = A & P
            if not feasible(R):
                continue
            for clause in nf.clauses:
                S = R.intersect([LinearConstraint(f - h, LT) for f in clause])
                x = find_point(S)
                if x is not None:
                    return False, (x, nf(x), h(x))
            x = _nf_above(R, list(nf.clauses), h)
            if x is not None:
                return False, (x, nf(x), h(x))
    return True, None


def term_to_pwa(t: LatticeTerm, gens: Sequence, region) -> PwaFunction:
    """The term as a PwaFunction on ``region``.

    ``gens[j]`` may be an AffineFunction or a PwaFunction defined on the region.
    """
    R = as_set(region)
    n, h = R.dim, R.height
    parts = [P for P in R.parts if feasible(P)]
    Rs = PolyhedralSet(n, parts, h)

    def go(t) -> PwaFunction:
        if isinstance(t, Gen) and isinstance(gens[t.index], PwaFunction):
            return gens[t.index].restrict(Rs)
        if isinstance(t, (Const, Coord, Gen)):
            return PwaFunction.affine(leaf_affine(t, gens, n, h), Rs)
        if isinstance(t, Neg):
            return -go(t.arg)
        if isinstance(t, IntScale):
            F = go(t.arg)
            return PwaFunction(n, [(P, f.scale(t.k)) for P, f in F.pieces], h, check=False)
        a, b = go(t.left), go(t.right)
        if isinstance(t, Add):
            return a + b
        return _formal_unchecked(a, b, isinstance(t, Min))

    return go(t)


def _formal_unchecked(F, G, take_min):
    pieces = []
    for P, f in F.pieces:
        for Q, g in G.pieces:
            R = P & Q
            if not feasible(R):
                continue
            if f == g:
                pieces.append((R, f))
                continue
            d = f - g if take_min else g - f
            for cons, k in ((LinearConstraint(d, LE), f), (LinearConstraint(-d, LT), g)):
                S = R.intersect(cons)
                if feasible(S):
                    pieces.append((S, k))
    return PwaFunction(F.dim, pieces, F.height, check=False)


def term_equals_pwa(t: LatticeTerm, gens: Sequence, g: PwaFunction, D=None):
    """Decide t == g on D piece by piece; returns (bool, witness point or None)."""
    D = g.domain if D is None else as_set(D)
    for A in D.parts:
        for P, h in g.pieces:
            R = A & P
            if not feasible(R):
                continue
            T = term_to_pwa(t, gens, R)
            ok, x = pwa_equal_on(T, PwaFunction.affine(h, R))
            if not ok:
                return False, x
    return True, None


def pwa_of_normal_form(nf: MinMaxNormalForm, region) -> PwaFunction:
    t = nf.as_term({f: i for i, f in enumerate(nf.affines())})
    return term_to_pwa(t, nf.affines(), region)
