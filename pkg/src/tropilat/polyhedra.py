"""Finite unions of polyhedra over Gamma^n, decided by Fourier-Motzkin elimination.

Constraints are ``f(x) rel 0`` with ``rel`` one of ``le``, ``lt``, ``eq``.
Strict inequalities are carried natively: over a divisible ordered group a
combination of bounds is strict exactly when one of its parents is.

Every emptiness verdict comes with a certificate: a witness point when the
set is inhabited, or for each part a Farkas-style combination of its
constraints that collapses to a false constant relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, EmptySetError
from .group import AffineFunction, GroupElement

LE, LT, EQ = "le", "lt", "eq"
_RELS = (LE, LT, EQ)
_ZERO = Fraction(0)


class LinearConstraint:
    """The set ``{x : affine(x) rel 0}``."""

    __slots__ = ("affine", "rel")

    def __init__(self, affine: AffineFunction, rel: str = LE):
        if rel not in _RELS:
            raise ValueError(f"unknown relation {rel!r}")
        object.__setattr__(self, "affine", affine)
        object.__setattr__(self, "rel", rel)

    def __setattr__(self, name, value):
        raise AttributeError("LinearConstraint is immutable")

    @property
    def dim(self) -> int:
        return self.affine.dim

    def holds(self, x: Sequence[GroupElement]) -> bool:
        return _rel_true(self.affine(x).sign(), self.rel)

    def negations(self) -> list["LinearConstraint"]:
        """Constraints whose union is the complement (disjoint pieces)."""
        f = self.affine
        if self.rel == LE:
            return [LinearConstraint(-f, LT)]
        if self.rel == LT:
            return [LinearConstraint(-f, LE)]
        return [LinearConstraint(f, LT), LinearConstraint(-f, LT)]

    def normalized(self) -> "LinearConstraint":
        f = self.affine
        for c in f.coeffs:
            if c:
                s = (1 / c) if self.rel == EQ else (1 / abs(c))
                return LinearConstraint(f.scale(s), self.rel) if s != 1 else self
        return self

    def pullback(self, rows, offsets) -> "LinearConstraint":
        return LinearConstraint(self.affine.pullback(rows, offsets), self.rel)

    def embed(self, new_dim: int, positions: Sequence[int]) -> "LinearConstraint":
        return LinearConstraint(self.affine.embed(new_dim, positions), self.rel)

    def relaxed(self) -> "LinearConstraint":
        return LinearConstraint(self.affine, LE) if self.rel == LT else self

    def __eq__(self, other):
        if not isinstance(other, LinearConstraint):
            return NotImplemented
        return self.rel == other.rel and self.affine == other.affine

    def __hash__(self):
        return hash((self.rel, self.affine))

    def sort_key(self):
        return (self.rel, self.affine.sort_key())

    def __repr__(self):
        sym = {LE: "<=", LT: "<", EQ: "=="}[self.rel]
        return f"[{self.affine!r} {sym} 0]"


def le(f: AffineFunction, g: AffineFunction | None = None) -> LinearConstraint:
    """f <= g (or f <= 0)."""
    return LinearConstraint(f if g is None else f - g, LE)


def lt(f: AffineFunction, g: AffineFunction | None = None) -> LinearConstraint:
    return LinearConstraint(f if g is None else f - g, LT)


def eq(f: AffineFunction, g: AffineFunction | None = None) -> LinearConstraint:
    return LinearConstraint(f if g is None else f - g, EQ)


def _rel_true(sign: int, rel: str) -> bool:
    if rel == EQ:
        return sign == 0
    if rel == LT:
        return sign < 0
    return sign <= 0


class Polyhedron:
    """Conjunction of linear constraints in ``dim`` variables at group height ``height``."""

    __slots__ = ("dim", "height", "constraints")

    def __init__(self, dim: int, constraints: Iterable[LinearConstraint] = (), height: int | None = None):
        constraints = tuple(constraints)
        for c in constraints:
            if c.dim != dim:
                raise DimensionMismatchError(f"constraint of dimension {c.dim} in a polyhedron of dimension {dim}")
        if height is None:
            height = constraints[0].affine.height if constraints else 1
        for c in constraints:
            if c.affine.height != height:
                raise DimensionMismatchError("constraints of mixed height")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "height", height)
        object.__setattr__(self, "constraints", constraints)

    def __setattr__(self, name, value):
        raise AttributeError("Polyhedron is immutable")

    @classmethod
    def universe(cls, dim: int, height: int = 1) -> "Polyhedron":
        return cls(dim, (), height)

    @classmethod
    def box(cls, lows: Sequence, highs: Sequence, height: int = 1) -> "Polyhedron":
        n = len(lows)
        cons = []
        for i, (a, b) in enumerate(zip(lows, highs)):
            x = AffineFunction.coordinate(i, n, height)
            cons.append(le(AffineFunction.constant(a, n, height) - x))
            cons.append(le(x - AffineFunction.constant(b, n, height)))
        return cls(n, cons, height)

    def contains(self, x: Sequence[GroupElement]) -> bool:
        return all(c.holds(x) for c in self.constraints)

    def __and__(self, other: "Polyhedron") -> "Polyhedron":
        return self.intersect(other)

    def intersect(self, other) -> "Polyhedron":
        if isinstance(other, LinearConstraint):
            return Polyhedron(self.dim, self.constraints + (other,), self.height)
        if isinstance(other, (list, tuple)):
            return Polyhedron(self.dim, self.constraints + tuple(other), self.height)
        if other.dim != self.dim:
            raise DimensionMismatchError("intersecting polyhedra of different dimension")
        return Polyhedron(self.dim, self.constraints + other.constraints, self.height)

    def pullback(self, rows, offsets, new_dim: int | None = None) -> "Polyhedron":
        """Preimage under ``y -> rows . y + offsets``."""
        nd = len(rows[0]) if rows else (new_dim or 0)
        return Polyhedron(nd, (c.pullback(rows, offsets) for c in self.constraints), self.height)

    def embed(self, new_dim: int, positions: Sequence[int]) -> "Polyhedron":
        return Polyhedron(new_dim, (c.embed(new_dim, positions) for c in self.constraints), self.height)

    def closure(self) -> "Polyhedron":
        return Polyhedron(self.dim, (c.relaxed() for c in self.constraints), self.height)

    def quotient(self, k: int = 1) -> "Polyhedron":
        cons = (LinearConstraint(c.affine.quotient(k), LE if c.rel == LT else c.rel) for c in self.constraints)
        return Polyhedron(self.dim, cons, self.height - k)

    def raise_height(self, extra: int = 1, at_front: bool = False) -> "Polyhedron":
        cons = (LinearConstraint(c.affine.raise_height(extra, at_front), c.rel) for c in self.constraints)
        return Polyhedron(self.dim, cons, self.height + extra)

    def canonical(self) -> "Polyhedron":
        """Normalized, deduplicated, deterministically ordered constraints."""
        seen = {}
        for c in self.constraints:
            n = c.normalized()
            seen.setdefault(n, None)
        return Polyhedron(self.dim, sorted(seen, key=LinearConstraint.sort_key), self.height)

    def __eq__(self, other):
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return (self.dim, self.height, self.constraints) == (other.dim, other.height, other.constraints)

    def __hash__(self):
        return hash((self.dim, self.height, self.constraints))

    def __repr__(self):
        return f"Polyhedron(dim={self.dim}, {list(self.constraints)})"


# --------------------------------------------------------------------------
# Fourier-Motzkin engine.  Rows are mutable-free tuples for speed:
# (coeffs, const_comps, strict, is_eq, cert)


class _Row:
    __slots__ = ("coeffs", "const", "strict", "is_eq", "cert")

    def __init__(self, coeffs, const, strict, is_eq, cert):
        self.coeffs = coeffs
        self.const = const
        self.strict = strict
        self.is_eq = is_eq
        self.cert = cert

    def const_sign(self) -> int:
        for c in self.const:
            if c:
                return 1 if c > 0 else -1
        return 0

    def is_constant(self) -> bool:
        return not any(self.coeffs)

    def truth(self) -> bool:
        s = self.const_sign()
        if self.is_eq:
            return s == 0
        if self.strict:
            return s < 0
        return s <= 0


def _scale_cert(cert, s):
    if cert is None:
        return None
    return {k: v * s for k, v in cert.items()}


def _comb_cert(c1, s1, c2, s2):
    if c1 is None:
        return None
    out = {k: v * s1 for k, v in c1.items()}
    for k, v in c2.items():
        w = out.get(k, _ZERO) + v * s2
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _combine(r1: _Row, s1, r2: _Row, s2) -> _Row:
    coeffs = tuple(s1 * a + s2 * b for a, b in zip(r1.coeffs, r2.coeffs))
    const = tuple(s1 * a + s2 * b for a, b in zip(r1.const, r2.const))
    strict = (r1.strict and s1 != 0) or (r2.strict and s2 != 0)
    return _Row(coeffs, const, strict, r1.is_eq and r2.is_eq, _comb_cert(r1.cert, s1, r2.cert, s2))


def _normalize(r: _Row) -> _Row:
    for c in r.coeffs:
        if c:
            s = (1 / c) if r.is_eq else (1 / abs(c))
            if s == 1:
                return r
            return _Row(tuple(s * a for a in r.coeffs), tuple(s * a for a in r.const),
                        r.strict, r.is_eq, _scale_cert(r.cert, s))
    return r


def _simplify(rows: list) -> list:
    """Normalize, drop tautologies, keep only the tightest of parallel bounds.

    Returns ``[false_row]`` as soon as a contradiction is visible.
    """
    ineq: dict = {}
    eqs: dict = {}
    for r in rows:
        r = _normalize(r)
        if r.is_constant():
            if r.truth():
                continue
            return [r]
        if r.is_eq:
            prev = eqs.get(r.coeffs)
            if prev is None:
                eqs[r.coeffs] = r
            elif prev.const != r.const:
                bad = _combine(prev, Fraction(1), r, Fraction(-1))
                return [bad]
            continue
        prev = ineq.get(r.coeffs)
        if prev is None or r.const > prev.const or (r.const == prev.const and r.strict and not prev.strict):
            ineq[r.coeffs] = r
    out = list(eqs.values())
    out.extend(ineq.values())
    return out


def _is_false_marker(rows: list) -> bool:
    return len(rows) == 1 and rows[0].is_constant() and not rows[0].truth()


def _eliminate(rows: list, i: int) -> list:
    """Eliminate variable ``i`` (the variable slot stays, with zero coefficients)."""
    pivot = None
    for r in rows:
        if r.is_eq and r.coeffs[i]:
            pivot = r
            break
    if pivot is not None:
        out = []
        p = pivot.coeffs[i]
        for r in rows:
            if r is pivot:
                continue
            a = r.coeffs[i]
            if a:
                r = _combine(r, Fraction(1), pivot, -a / p)
            out.append(r)
        return _simplify(out)
    pos, neg, out = [], [], []
    for r in rows:
        a = r.coeffs[i]
        if a > 0:
            pos.append(r)
        elif a < 0:
            neg.append(r)
        else:
            out.append(r)
    for p in pos:
        a = p.coeffs[i]
        for q in neg:
            out.append(_combine(p, -q.coeffs[i], q, a))
    return _simplify(out)


def _choose_variable(rows: list, candidates) -> int:
    best, best_cost = None, None
    for v in candidates:
        npos = nneg = 0
        has_eq = False
        for r in rows:
            a = r.coeffs[v]
            if a:
                if r.is_eq:
                    has_eq = True
                    break
                if a > 0:
                    npos += 1
                else:
                    nneg += 1
        cost = -1 if has_eq else npos * nneg - npos - nneg
        if best_cost is None or cost < best_cost:
            best, best_cost = v, cost
    return best


def _rows_of(P: Polyhedron, track: bool) -> list:
    rows = []
    for k, c in enumerate(P.constraints):
        f = c.affine
        rows.append(_Row(f.coeffs, f.const.comps, c.rel == LT, c.rel == EQ,
                         {k: Fraction(1)} if track else None))
    return _simplify(rows)


def _run_fm(P: Polyhedron, order: Sequence[int] | None = None, track: bool = False, keep_stages: bool = False):
    """Eliminate every variable.  Returns (final_rows, stages)."""
    rows = _rows_of(P, track)
    stages = []
    remaining = list(range(P.dim))
    while remaining and not _is_false_marker(rows):
        if order is not None:
            v = order[P.dim - len(remaining)]
        else:
            live = [v for v in remaining if any(r.coeffs[v] for r in rows)]
            if not live:
                break
            v = _choose_variable(rows, live)
        remaining.remove(v)
        if keep_stages:
            stages.append((v, rows))
        rows = _eliminate(rows, v)
    return rows, stages, remaining


def feasible(P: Polyhedron) -> bool:
    """Fast decision (no certificate)."""
    rows, _, _ = _run_fm(P)
    return not _is_false_marker(rows)


def _back_substitute(P: Polyhedron, stages, free) -> tuple:
    h = P.height
    zero = GroupElement.zero(h)
    one = GroupElement.unit(h)
    values: list = [None] * P.dim
    for v in free:
        values[v] = zero
    for v, rows in reversed(stages):
        lo = hi = fixed = None
        for r in rows:
            a = r.coeffs[v]
            if not a:
                continue
            acc = list(r.const)
            for j, m in enumerate(r.coeffs):
                if m and j != v:
                    for k, comp in enumerate(values[j].comps):
                        if comp:
                            acc[k] += m * comp
            b = GroupElement._raw(tuple(-x / a for x in acc))
            if r.is_eq:
                fixed = b
            elif a > 0:
                if hi is None or b < hi:
                    hi = b
            elif lo is None or b > lo:
                lo = b
        if fixed is not None:
            values[v] = fixed
        elif lo is not None and hi is not None:
            values[v] = lo if lo == hi else (lo + hi).scale(Fraction(1, 2))
        elif lo is not None:
            values[v] = lo + one
        elif hi is not None:
            values[v] = hi - one
        else:
            values[v] = zero
    return tuple(values)


@dataclass(frozen=True)
class Refutation:
    """Multipliers (constraint index -> rational) of one part; non-negative on inequalities."""

    part: int
    multipliers: tuple

    def as_dict(self) -> dict:
        return dict(self.multipliers)


@dataclass(frozen=True)
class EmptinessCertificate:
    witness: tuple | None = None
    witness_part: int | None = None
    refutations: tuple = field(default_factory=tuple)

    @property
    def empty(self) -> bool:
        return self.witness is None


def verify_refutation(P: Polyhedron, multipliers: dict) -> bool:
    """Re-check a Farkas-style refutation by exact arithmetic."""
    coeffs = [Fraction(0)] * P.dim
    const = GroupElement.zero(P.height)
    strict = False
    all_eq = True
    for k, lam in multipliers.items():
        lam = Fraction(lam)
        c = P.constraints[k]
        if c.rel != EQ:
            if lam < 0:
                return False
            all_eq = False
            if c.rel == LT and lam > 0:
                strict = True
        for j, m in enumerate(c.affine.coeffs):
            coeffs[j] += lam * m
        const = const + c.affine.const.scale(lam)
    if any(coeffs):
        return False
    s = const.sign()
    if all_eq:
        return s != 0
    if strict:
        return s >= 0
    return s > 0


def fm_eliminate(P: Polyhedron, i: int) -> Polyhedron:
    """Projection of P along variable ``i``; the result lives in ``dim - 1`` variables."""
    if not 0 <= i < P.dim:
        raise IndexError(f"variable {i} out of range for dimension {P.dim}")
    rows = _eliminate(_rows_of(P, False), i)
    return _polyhedron_from_rows(rows, P.dim, P.height, drop=[i])


def project(P: Polyhedron, keep: Sequence[int]) -> Polyhedron:
    """Projection onto the coordinates ``keep`` (in that order)."""
    keep = list(keep)
    rows = _rows_of(P, False)
    drop = [v for v in range(P.dim) if v not in keep]
    todo = list(drop)
    while todo and not _is_false_marker(rows):
        v = _choose_variable(rows, todo)
        todo.remove(v)
        rows = _eliminate(rows, v)
    out = _polyhedron_from_rows(rows, P.dim, P.height, drop=drop)
    remaining = [v for v in range(P.dim) if v not in drop]
    if remaining != keep:
        rows_map = [[Fraction(int(k == r)) for k in keep] for r in remaining]
        out = out.pullback(rows_map, [GroupElement.zero(P.height)] * len(remaining), len(keep))
    return out


def _polyhedron_from_rows(rows, dim, height, drop=()) -> Polyhedron:
    keep = [v for v in range(dim) if v not in set(drop)]
    cons = []
    for r in rows:
        f = AffineFunction._raw(tuple(r.coeffs[v] for v in keep), GroupElement._raw(tuple(r.const)))
        rel = EQ if r.is_eq else (LT if r.strict else LE)
        cons.append(LinearConstraint(f, rel))
    return Polyhedron(len(keep), cons, height)


def polyhedron_is_empty(P: Polyhedron, part: int = 0):
    """Decide one polyhedron; returns (empty, witness_or_refutation)."""
    rows, stages, free = _run_fm(P, track=True, keep_stages=True)
    if _is_false_marker(rows):
        mult = tuple(sorted(rows[0].cert.items()))
        return True, Refutation(part, mult)
    return False, _back_substitute(P, stages, free)


def sample_point(P: Polyhedron) -> tuple:
    """Deterministic exact point of a nonempty polyhedron."""
    empty, data = polyhedron_is_empty(P)
    if empty:
        raise EmptySetError("polyhedron is empty", EmptinessCertificate(refutations=(data,)))
    return data


class PolyhedralSet:
    """Finite union of polyhedra in ``dim`` variables."""

    __slots__ = ("dim", "height", "parts")

    def __init__(self, dim: int, parts: Iterable[Polyhedron] = (), height: int | None = None):
        parts = tuple(parts)
        for p in parts:
            if p.dim != dim:
                raise DimensionMismatchError(f"part of dimension {p.dim} in a set of dimension {dim}")
        if height is None:
            height = parts[0].height if parts else 1
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "height", height)
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("PolyhedralSet is immutable")

    @classmethod
    def of(cls, *parts: Polyhedron) -> "PolyhedralSet":
        return cls(parts[0].dim, parts, parts[0].height)

    @classmethod
    def empty_set(cls, dim: int, height: int = 1) -> "PolyhedralSet":
        return cls(dim, (), height)

    @classmethod
    def universe(cls, dim: int, height: int = 1) -> "PolyhedralSet":
        return cls(dim, (Polyhedron.universe(dim, height),), height)

    def contains(self, x) -> bool:
        return any(p.contains(x) for p in self.parts)

    def canonical(self) -> "PolyhedralSet":
        parts = {p.canonical() for p in self.parts if feasible(p)}
        return PolyhedralSet(self.dim, sorted(parts, key=_part_key), self.height)

    def nonempty_parts(self) -> list:
        return [p for p in self.parts if feasible(p)]

    def union(self, other: "PolyhedralSet") -> "PolyhedralSet":
        return PolyhedralSet(self.dim, self.parts + other.parts, self.height)

    def intersect(self, other) -> "PolyhedralSet":
        if isinstance(other, (Polyhedron, LinearConstraint, list, tuple)):
            parts = (p.intersect(other) for p in self.parts)
        else:
            parts = (p & q for p in self.parts for q in other.parts)
        return PolyhedralSet(self.dim, [p for p in parts if feasible(p)], self.height)

    def closure(self) -> "PolyhedralSet":
        return closure(self)

    def pullback(self, rows, offsets, new_dim=None) -> "PolyhedralSet":
        parts = [p.pullback(rows, offsets, new_dim) for p in self.parts]
        nd = len(rows[0]) if rows else new_dim
        return PolyhedralSet(nd, parts, self.height)

    def embed(self, new_dim, positions) -> "PolyhedralSet":
        return PolyhedralSet(new_dim, [p.embed(new_dim, positions) for p in self.parts], self.height)

    def quotient(self, k: int = 1) -> "PolyhedralSet":
        return PolyhedralSet(self.dim, [p.quotient(k) for p in self.parts if feasible(p)], self.height - k)

    def raise_height(self, extra=1, at_front=False) -> "PolyhedralSet":
        return PolyhedralSet(self.dim, [p.raise_height(extra, at_front) for p in self.parts], self.height + extra)

    def __repr__(self):
        return f"PolyhedralSet(dim={self.dim}, parts={list(self.parts)})"


def _part_key(p: Polyhedron):
    return tuple(c.sort_key() for c in p.constraints)


def as_set(S) -> PolyhedralSet:
    if isinstance(S, PolyhedralSet):
        return S
    if isinstance(S, Polyhedron):
        return PolyhedralSet(S.dim, (S,), S.height)
    raise TypeError(f"expected a polyhedron or polyhedral set, got {type(S).__name__}")


def is_empty(S) -> tuple:
    """Decide emptiness of a polyhedral set; returns ``(empty, certificate)``."""
    S = as_set(S)
    refutations = []
    for k, P in enumerate(S.parts):
        empty, data = polyhedron_is_empty(P, k)
        if not empty:
            return False, EmptinessCertificate(witness=data, witness_part=k)
        refutations.append(data)
    return True, EmptinessCertificate(refutations=tuple(refutations))


def verify_certificate(S, empty: bool, cert: EmptinessCertificate) -> bool:
    S = as_set(S)
    if not empty:
        return cert.witness is not None and S.parts[cert.witness_part].contains(cert.witness)
    if len(cert.refutations) != len(S.parts):
        return False
    return all(verify_refutation(S.parts[r.part], r.as_dict()) for r in cert.refutations)


def find_point(S) -> tuple | None:
    """A point of S, or None when S is empty."""
    for P in as_set(S).parts:
        rows, stages, free = _run_fm(P, keep_stages=True)
        if not _is_false_marker(rows):
            return _back_substitute(P, stages, free)
    return None


def set_feasible(S) -> bool:
    return any(feasible(P) for P in as_set(S).parts)


def subtract_polyhedron(P: Polyhedron, Q: Polyhedron) -> list:
    """P minus Q as a list of pairwise disjoint nonempty polyhedra."""
    out = []
    cur = P
    for c in Q.constraints:
        for neg in c.negations():
            piece = cur.intersect(neg)
            if feasible(piece):
                out.append(piece)
        cur = cur.intersect(c)
        if not feasible(cur):
            break
    return out


def subtract(S, T) -> PolyhedralSet:
    S, T = as_set(S), as_set(T)
    parts = [p for p in S.parts if feasible(p)]
    for Q in T.parts:
        nxt = []
        for p in parts:
            nxt.extend(subtract_polyhedron(p, Q))
        parts = nxt
        if not parts:
            break
    return PolyhedralSet(S.dim, parts, S.height)


def is_subset(S, T) -> bool:
    return not set_feasible(subtract(S, T))


def witness_outside(S, T):
    """A point of S not in T, or None."""
    return find_point(subtract(S, T))


def set_equal(S, T) -> bool:
    return is_subset(S, T) and is_subset(T, S)


def complement(S) -> PolyhedralSet:
    S = as_set(S)
    return subtract(PolyhedralSet.universe(S.dim, S.height), S)


def intersect_with_union(S, constraints_union: Sequence[LinearConstraint]) -> PolyhedralSet:
    """S intersected with the union of half-spaces, pruning empty parts."""
    S = as_set(S)
    parts = []
    for p in S.parts:
        for c in constraints_union:
            q = p.intersect(c)
            if feasible(q):
                parts.append(q)
    return PolyhedralSet(S.dim, parts, S.height)


def closure(S) -> PolyhedralSet:
    """Topological closure: relax strict inequalities in every nonempty part."""
    S = as_set(S)
    return PolyhedralSet(S.dim, [p.closure() for p in S.parts if feasible(p)], S.height)


def _rank(vectors: list) -> int:
    from .linalg import rank
    return rank(vectors)


def polyhedron_dimension(P: Polyhedron) -> int:
    if not feasible(P):
        return -1
    normals = []
    for c in P.constraints:
        if not any(c.affine.coeffs):
            continue
        if c.rel == EQ:
            normals.append(list(c.affine.coeffs))
        elif c.rel == LE and not feasible(P.intersect(LinearConstraint(c.affine, LT))):
            normals.append(list(c.affine.coeffs))
    return P.dim - _rank(normals)


def dimension(S) -> int:
    """O-minimal dimension of a polyhedral set; -1 when empty."""
    S = as_set(S)
    return max((polyhedron_dimension(p) for p in S.parts), default=-1)


def implicit_equalities(P: Polyhedron) -> list:
    out = []
    for c in P.constraints:
        if not any(c.affine.coeffs):
            continue
        if c.rel == EQ or (c.rel == LE and not feasible(P.intersect(LinearConstraint(c.affine, LT)))):
            out.append(c.affine)
    return out


def midpoint_map(n: int, height: int):
    """Rows/offsets of (u, v) -> (u + v) / 2 on Gamma^(2n)."""
    half = Fraction(1, 2)
    rows = []
    for i in range(n):
        row = [Fraction(0)] * (2 * n)
        row[i] = half
        row[n + i] = half
        rows.append(row)
    return rows, [GroupElement.zero(height)] * n


def doubled(P: Polyhedron, second: bool) -> Polyhedron:
    """P placed on the first or second block of Gamma^(2n)."""
    n = P.dim
    positions = list(range(n, 2 * n)) if second else list(range(n))
    return P.embed(2 * n, positions)


def is_convex(S) -> bool:
    """Midpoint convexity, decided on the doubled space."""
    S = as_set(S)
    parts = [p for p in S.parts if feasible(p)]
    if len(parts) <= 1:
        return True
    n, h = S.dim, S.height
    rows, offs = midpoint_map(n, h)
    mid = PolyhedralSet(2 * n, [p.pullback(rows, offs) for p in parts], h)
    for i, p in enumerate(parts):
        for q in parts[i + 1:]:
            region = doubled(p, False) & doubled(q, True)
            if set_feasible(subtract(region, mid)):
                return False
    return True


def is_bounded(S) -> bool:
    """Every coordinate of every nonempty part is bounded above and below."""
    S = as_set(S)
    for P in S.parts:
        if not feasible(P):
            continue
        for i in range(P.dim):
            line = project(P, [i])
            has_lo = has_hi = False
            for c in line.constraints:
                a = c.affine.coeffs[0]
                if not a:
                    continue
                if c.rel == EQ:
                    has_lo = has_hi = True
                elif a > 0:
                    has_hi = True
                else:
                    has_lo = True
            if not (has_lo and has_hi):
                return False
    return True
