"""Piecewise-affine functions on polyhedral domains.

A :class:`PwaFunction` is a list of ``(Polyhedron, AffineFunction)`` pieces
that agree wherever they overlap.  Consistency is checked on construction
unless the caller builds the pieces in a way that makes it automatic.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Sequence

from .errors import DimensionMismatchError, PreconditionError
from .group import AffineFunction, GroupElement
from .polyhedra import (
    EQ, LE, LT, LinearConstraint, Polyhedron, PolyhedralSet, as_set, doubled, feasible,
    find_point, is_convex, polyhedron_dimension, set_equal, witness_outside,
)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("TROPILAT_THREADS", "1")))
    except ValueError:
        return 1


def ordered_map(fn, items):
    """``map`` that may use threads but always returns results in input order."""
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


class PwaFunction:
    """Piecewise-affine function on the union of its piece polyhedra."""

    __slots__ = ("dim", "height", "pieces")

    def __init__(self, dim: int, pieces: Sequence, height: int | None = None, check: bool = True):
        pieces = tuple((P, f) for P, f in pieces)
        for P, f in pieces:
            if P.dim != dim or f.dim != dim:
                raise DimensionMismatchError("piece dimension does not match the function")
        if height is None:
            height = pieces[0][1].height if pieces else 1
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "height", height)
        object.__setattr__(self, "pieces", pieces)
        if check:
            bad = self.inconsistency()
            if bad is not None:
                i, j, x = bad
                raise PreconditionError(f"pieces {i} and {j} disagree at {x}", witness=bad)

    def __setattr__(self, name, value):
        raise AttributeError("PwaFunction is immutable")

    @classmethod
    def affine(cls, f: AffineFunction, domain) -> "PwaFunction":
        D = as_set(domain)
        return cls(D.dim, [(P, f) for P in D.parts], D.height, check=False)

    @property
    def domain(self) -> PolyhedralSet:
        return PolyhedralSet(self.dim, [P for P, _ in self.pieces], self.height)

    def affines(self) -> list:
        seen = {}
        for _, f in self.pieces:
            seen.setdefault(f, None)
        return list(seen)

    def inconsistency(self):
        """First ``(i, j, point)`` where two pieces disagree, else None."""
        ps = self.pieces
        for i in range(len(ps)):
            P, f = ps[i]
            for j in range(i + 1, len(ps)):
                Q, g = ps[j]
                if f == g:
                    continue
                R = P & Q
                for c in (LinearConstraint(f - g, LT), LinearConstraint(g - f, LT)):
                    x = find_point(R.intersect(c))
                    if x is not None:
                        return i, j, x
        return None

    def __call__(self, x) -> GroupElement:
        return eval_pwa(self, x)

    def pruned(self) -> "PwaFunction":
        return PwaFunction(self.dim, [(P, f) for P, f in self.pieces if feasible(P)], self.height, check=False)

    def restrict(self, D) -> "PwaFunction":
        D = as_set(D)
        pieces = []
        for P, f in self.pieces:
            for Q in D.parts:
                R = P & Q
                if feasible(R):
                    pieces.append((R, f))
        return PwaFunction(self.dim, pieces, self.height, check=False)

    def __neg__(self):
        return PwaFunction(self.dim, [(P, -f) for P, f in self.pieces], self.height, check=False)

    def _combine(self, other, op) -> "PwaFunction":
        if isinstance(other, AffineFunction):
            return PwaFunction(self.dim, [(P, op(f, other)) for P, f in self.pieces], self.height, check=False)
        pieces = []
        for P, f in self.pieces:
            for Q, g in other.pieces:
                R = P & Q
                if feasible(R):
                    pieces.append((R, op(f, g)))
        return PwaFunction(self.dim, pieces, self.height, check=False)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def closure(self) -> "PwaFunction":
        return PwaFunction(self.dim, [(P.closure(), f) for P, f in self.pieces if feasible(P)],
                           self.height, check=False)

    def quotient(self, k: int = 1) -> "PwaFunction":
        pieces = [(P.quotient(k), f.quotient(k)) for P, f in self.pieces if feasible(P)]
        return PwaFunction(self.dim, pieces, self.height - k, check=False)

    def raise_height(self, extra: int = 1, at_front: bool = False) -> "PwaFunction":
        pieces = [(P.raise_height(extra, at_front), f.raise_height(extra, at_front)) for P, f in self.pieces]
        return PwaFunction(self.dim, pieces, self.height + extra, check=False)

    def __repr__(self):
        return f"PwaFunction(dim={self.dim}, pieces={list(self.pieces)})"


def eval_pwa(F: PwaFunction, x) -> GroupElement:
    for P, f in F.pieces:
        if P.contains(x):
            return f(x)
    raise PreconditionError(f"point {x} is outside the domain", witness=x)


def is_w_combination(g: PwaFunction, gens: Sequence[AffineFunction]):
    """Decide ``dom(g) = union_i [g = f_i]``.

    Returns ``(True, cover)`` with, per piece, the generator indices that meet
    it, or ``(False, x)`` with a point where ``g`` differs from every generator.
    """
    for f in gens:
        if f.dim != g.dim:
            raise DimensionMismatchError("generator dimension does not match")
    cover = []
    for P, h in g.pieces:
        if not feasible(P):
            cover.append(())
            continue
        x = _uncovered_point(P, [h - f for f in gens])
        if x is not None:
            return False, x
        cover.append(tuple(i for i, f in enumerate(gens)
                           if h == f or feasible(P.intersect(LinearConstraint(h - f, EQ)))))
    return True, tuple(cover)


def _uncovered_point(P: Polyhedron, diffs):
    """A point of P where every diff is nonzero, by branching on signs."""
    diffs = [d for d in diffs]
    if any(not any(d.coeffs) and d.const.is_zero() for d in diffs):
        return None

    def rec(R, i):
        if i == len(diffs):
            return find_point(R)
        d = diffs[i]
        if not any(d.coeffs):
            return rec(R, i + 1)
        for c in (LinearConstraint(d, LT), LinearConstraint(-d, LT)):
            S = R.intersect(c)
            if feasible(S):
                x = rec(S, i + 1)
                if x is not None:
                    return x
        return None

    return rec(P, 0)


def _violation_region(P, f, Q, g, M, n):
    """{(x, y) : x in P, y in Q, f(x) - g(y) > M * |x - y|_inf} on Gamma^(2n)."""
    fx = f.embed(2 * n, range(n))
    gy = g.embed(2 * n, range(n, 2 * n))
    diff = fx - gy
    cons = []
    for k in range(n):
        d = [Fraction(0)] * (2 * n)
        d[k] = Fraction(M)
        d[n + k] = Fraction(-M)
        step = AffineFunction._raw(tuple(d), GroupElement.zero(f.height))
        cons.append(LinearConstraint(step - diff, LT))
        cons.append(LinearConstraint(-step - diff, LT))
    if n == 0:
        cons.append(LinearConstraint(-diff, LT))
    return (doubled(P, False) & doubled(Q, True)).intersect(cons)


def is_lipschitz_with(F: PwaFunction, M: int):
    """Exact decision of ``|F(x) - F(y)| <= M |x - y|`` on the whole domain.

    Returns ``(True, None)`` or ``(False, (x, y))`` with an exact violating pair.
    """
    if M < 0 or int(M) != M:
        raise ValueError("Lipschitz constants are non-negative integers")
    n = F.dim
    pieces = [(P, f) for P, f in F.pieces if feasible(P)]
    # one affine function with l1 slope norm <= M is M-Lipschitz everywhere
    pairs = [(i, j) for i in range(len(pieces)) for j in range(len(pieces))
             if not (pieces[i][1] == pieces[j][1] and _l1(pieces[i][1]) <= M)]

    def check(pair):
        (P, f), (Q, g) = pieces[pair[0]], pieces[pair[1]]
        return find_point(_violation_region(P, f, Q, g, M, n))

    for pt in ordered_map(check, pairs):
        if pt is not None:
            return False, (tuple(pt[:n]), tuple(pt[n:]))
    return True, None


def violates_lipschitz(F: PwaFunction, M: int, x, y) -> bool:
    """Exact re-check of a witness pair."""
    from .group import norm_inf
    d = abs(eval_pwa(F, x) - eval_pwa(F, y))
    dist = norm_inf([a - b for a, b in zip(x, y)]) if F.dim else GroupElement.zero(F.height)
    return d > dist.scale(M)


@dataclass(frozen=True)
class LipschitzReport:
    decided: str  # "lipschitz" | "not_lipschitz" | "unknown"
    M: int | None = None
    witness: tuple | None = None
    cap: int | None = None


def _l1(f: AffineFunction) -> Fraction:
    return sum((abs(c) for c in f.coeffs), Fraction(0))


def lipschitz_search(F: PwaFunction, cap: int) -> LipschitzReport:
    """Smallest integer Lipschitz constant, searched as documented in the README."""
    if cap < 0:
        raise ValueError("cap must be non-negative")
    pieces = [(P, f) for P, f in F.pieces if feasible(P)]
    if not pieces:
        return LipschitzReport("lipschitz", 0)
    if is_convex(F.domain):
        upper = max(ceil(_l1(f)) for _, f in pieces)
        lower = max((ceil(_l1(f)) for P, f in pieces if polyhedron_dimension(P) == F.dim), default=0)
        lower = min(lower, upper)
        if is_lipschitz_with(F, upper)[0]:
            return LipschitzReport("lipschitz", _bisect(F, lower, upper))
    prev = -1
    M = 0
    while M <= cap:
        ok, _ = is_lipschitz_with(F, M)
        if ok:
            return LipschitzReport("lipschitz", _bisect(F, prev + 1, M))
        prev = M
        M = 1 if M == 0 else 2 * M
    return LipschitzReport("unknown", cap=cap)


def _bisect(F, lo, hi) -> int:
    """Least M in [lo, hi] accepted, given that hi is accepted."""
    while lo < hi:
        mid = (lo + hi) // 2
        if is_lipschitz_with(F, mid)[0]:
            hi = mid
        else:
            lo = mid + 1
    return hi


def extend_to_closure(F: PwaFunction) -> PwaFunction:
    """Continuous extension to the closure of the domain (caller guarantees Lipschitz)."""
    closed = F.closure()
    bad = closed.inconsistency()
    if bad is not None:
        i, j, x = bad
        raise PreconditionError(
            f"precondition violated: F not Lipschitz-extendable (closed pieces {i}, {j} disagree)",
            witness=(closed.pieces[i], closed.pieces[j], x),
        )
    return closed


def _formal(F: PwaFunction, G: PwaFunction, take_min: bool) -> PwaFunction:
    if F.dim != G.dim:
        raise DimensionMismatchError("dimensions differ")
    if not set_equal(F.domain, G.domain):
        raise PreconditionError("domains differ", witness=witness_outside(F.domain, G.domain)
                                or witness_outside(G.domain, F.domain))
    pieces = []
    for P, f in F.pieces:
        for Q, g in G.pieces:
            R = P & Q
            if not feasible(R):
                continue
            if f == g:
                pieces.append((R, f))
                continue
            # ties go to the first argument
            keep_f = LinearConstraint(f - g, LE) if take_min else LinearConstraint(g - f, LE)
            keep_g = LinearConstraint(g - f, LT) if take_min else LinearConstraint(f - g, LT)
            for cons, h in ((keep_f, f), (keep_g, g)):
                S = R.intersect(cons)
                if feasible(S):
                    pieces.append((S, h))
    return PwaFunction(F.dim, pieces, F.height, check=False)


def formal_min(F: PwaFunction, G: PwaFunction) -> PwaFunction:
    return _formal(F, G, True)


def formal_max(F: PwaFunction, G: PwaFunction) -> PwaFunction:
    return _formal(F, G, False)


def pwa_equal_on(F: PwaFunction, G: PwaFunction, D=None):
    """Decide F == G on D (default: F's domain); returns (bool, witness)."""
    D = F.domain if D is None else as_set(D)
    for A in D.parts:
        for P, f in F.pieces:
            R = A & P
            if not feasible(R):
                continue
            for Q, g in G.pieces:
                if f == g:
                    continue
                S = R & Q
                for c in (LinearConstraint(f - g, LT), LinearConstraint(g - f, LT)):
                    x = find_point(S.intersect(c))
                    if x is not None:
                        return False, x
    return True, None
