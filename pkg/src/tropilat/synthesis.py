"""Synthesis of lattice terms for piecewise-affine functions.

``synth_min_max`` decides whether g is a min-of-max of the generators and
either returns the term or a pair of points showing it cannot be one.
``synth_lipschitz`` builds an (l,+)-term for any Lipschitz w-combination by
closing the domain, truncating unbounded domains, reducing the value group
height and gluing cell-wise separating functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .celldecomp import (
    ClosedCell, build_separating_function, closed_cells, linear_decomposition, make_special,
    separating_hyperplane, SeparationCertificate,
)
from .config import DEFAULT, SearchConfig
from .errors import (
    CapExhaustedError, DimensionMismatchError, NotLipschitzError, NotWCombinationError,
    PreconditionError, VerificationError,
)
from .group import AffineFunction, GroupElement
from .lattice import (
    Add, Const, Coord, Gen, IntScale, LatticeTerm, Neg, abs_term, affine_as_term,
    constants_of, map_constants, max_of, min_of, normalize, simplify, substitute_gens, term_equals_on,
    term_equals_pwa, term_to_pwa,
)
from .polyhedra import (
    EQ, LE, LT, LinearConstraint, Polyhedron, PolyhedralSet, as_set, closure, feasible, find_point,
    is_bounded, is_subset, witness_outside,
)
from .pwa import PwaFunction, extend_to_closure, is_lipschitz_with, is_w_combination, ordered_map


# --------------------------------------------------------------------------
# min/max synthesis


@dataclass(frozen=True)
class SynthesisResult:
    accepted: bool
    term: LatticeTerm | None = None
    s_min: tuple = ()
    witness: tuple | None = None
    transcript: dict = field(default_factory=dict)


def in_S(g: PwaFunction, gens: Sequence[AffineFunction], D, X) -> bool:
    """Is g <= max_{i in X} f_i on all of D?  (empty D∩{g > f_i for all i in X})."""
    D = as_set(D)
    for A in D.parts:
        for P, h in g.pieces:
            R = (A & P).intersect([LinearConstraint(gens[i] - h, LT) for i in X])
            if feasible(R):
                return False
    return True


def _sign_leaves(R: Polyhedron, h: AffineFunction, gens: Sequence[AffineFunction]) -> list:
    """Realized sign vectors of f_i - h on R as (U, A, sample) with U = {f_i >= h}, A = {f_i <= h}."""
    out = []
    m = len(gens)

    def rec(R, i, U, A):
        if i == m:
            out.append((frozenset(U), frozenset(A), find_point(R)))
            return
        d = gens[i] - h
        if not any(d.coeffs):
            s = d.const.sign()
            rec(R, i + 1, U + [i] if s >= 0 else U, A + [i] if s <= 0 else A)
            return
        for rel, u, a in ((LT, False, True), (EQ, True, True), ("gt", True, False)):
            c = LinearConstraint(-d, LT) if rel == "gt" else LinearConstraint(d, rel)
            S = R.intersect(c)
            if feasible(S):
                rec(S, i + 1, U + [i] if u else U, A + [i] if a else A)

    if feasible(R):
        rec(R, 0, [], [])
    return out


def minimal_transversals(family) -> list:
    """Minimal hitting sets of a family of sets (Berge's algorithm)."""
    edges = sorted({frozenset(e) for e in family}, key=lambda e: (len(e), sorted(e)))
    minimal = [e for e in edges if not any(f < e for f in edges)]
    tr = [frozenset()]
    for e in minimal:
        nxt = set()
        for t in tr:
            if t & e:
                nxt.add(t)
            else:
                for v in e:
                    nxt.add(t | {v})
        nxt = sorted(nxt, key=len)
        tr = []
        for t in nxt:
            if not any(k <= t for k in tr):
                tr.append(t)
    return tr


def _check_domain(g: PwaFunction, gens, D):
    for f in gens:
        if f.dim != g.dim:
            raise DimensionMismatchError("generator dimension does not match")
    if D is None:
        return
    if D.dim != g.dim:
        raise DimensionMismatchError("domain dimension does not match")
    x = witness_outside(D, g.domain)
    if x is not None:
        raise PreconditionError("D is not contained in the domain of g", witness=x)


def synth_min_max(g: PwaFunction, gens: Sequence[AffineFunction], D=None) -> SynthesisResult:
    """Accept with ``min_{X in S_min} max_{i in X} f_i`` or reject with a pair (x, y)."""
    gens = list(gens)
    if D is None:
        D = g.domain
        _check_domain(g, gens, None)
        gD = g
    else:
        D = as_set(D)
        _check_domain(g, gens, D)
        gD = g.restrict(D)
    ok, info = is_w_combination(gD, gens)
    if not ok:
        raise NotWCombinationError("g is not a w-combination of the generators", witness=info)
    return _min_max(gD, gens, D)


def _min_max(gD: PwaFunction, gens, D) -> SynthesisResult:
    if not gD.pieces:
        return SynthesisResult(True, Gen(0) if gens else None, (), None, {"sign_vectors": 0})
    leaves = []
    for chunk in ordered_map(lambda piece: _sign_leaves(piece[0], piece[1], gens), gD.pieces):
        leaves.extend(chunk)
    s_min = sorted((tuple(sorted(X)) for X in minimal_transversals(U for U, _, _ in leaves)),
                   key=lambda X: (len(X), X))
    term = min_of(max_of(Gen(i) for i in X) for X in s_min)
    nf = normalize(term, gens, gD.dim, gD.height)
    equal, detail = term_equals_on(nf, gD, D)
    transcript = {"sign_vectors": len(leaves), "s_min": [list(X) for X in s_min]}
    if equal:
        transcript["equality"] = "verified"
        return SynthesisResult(True, term, tuple(s_min), None, transcript)
    transcript["equality"] = "failed"
    transcript["mismatch"] = detail
    for _, A, x in leaves:
        for U, _, y in leaves:
            if not (A & U):
                if not violates_condition_4(gD, gens, x, y):
                    raise VerificationError("rejection witness does not re-check", (x, y))
                return SynthesisResult(False, None, tuple(s_min), (x, y), transcript)
    raise VerificationError("neither acceptance nor a rejection witness", detail)


def violates_condition_4(g: PwaFunction, gens, x, y) -> bool:
    """For every i: f_i(x) > g(x) or g(y) > f_i(y)."""
    gx, gy = g(x), g(y)
    return all(f(x) > gx or gy > f(y) for f in gens)


# --------------------------------------------------------------------------
# truncation and lift


def _rho_denominator(t: LatticeTerm) -> int:
    """lcm of the denominators of the leading (rho) components of t's constants."""
    m = 1
    for c in constants_of(t):
        m = lcm(m, c.comps[0].denominator)
    return m


def _nu_substitute(t: LatticeTerm, m: int, nu: LatticeTerm) -> LatticeTerm:
    def leaf(c: GroupElement):
        K = int(c.comps[0] * m)
        beta = GroupElement._raw(c.comps[1:])
        if K == 0:
            return Const(beta)
        scaled = nu if K == 1 else IntScale(K, nu)
        return scaled if beta.is_zero() else Add(scaled, Const(beta))
    return map_constants(t, leaf)


def nu_term(n: int, nu0: GroupElement) -> LatticeTerm:
    """max(|x_1|, ..., |x_n|, 2 nu0)."""
    return max_of([abs_term(Coord(i)) for i in range(n)] + [Const(nu0.scale(2))])


def lift_truncated_term(t: LatticeTerm, g: PwaFunction, gens: Sequence[AffineFunction], D,
                        nu_level: int = 0, cap: int = 20):
    """Turn a term valid on D ∩ [-rho, rho]^n (one level higher) into one valid on D.

    Returns ``(term, nu0)``; nu0 is searched by doubling multiples of the unit at
    ``nu_level`` and each candidate is verified exactly in the (x, nu) space.
    """
    D = as_set(D)
    n, h = g.dim, g.height
    m = _rho_denominator(t)
    ext_gens = [f.embed(n + 1, range(n)) for f in gens]
    t_ext = _nu_substitute(t, m, Coord(n))
    g_ext = PwaFunction(n + 1, [(P.embed(n + 1, range(n)), f.embed(n + 1, range(n))) for P, f in g.pieces],
                        h, check=False)
    nu = AffineFunction.coordinate(n, n + 1, h)
    unit = GroupElement.unit(h, nu_level)
    for j in range(cap + 1):
        nu0 = unit.scale(1 << j)
        c0 = AffineFunction._raw((Fraction(0),) * (n + 1), nu0)
        cons = [LinearConstraint(c0 - nu, LT)]
        for i in range(n):
            xi = AffineFunction.coordinate(i, n + 1, h)
            cons.append(LinearConstraint(xi - nu.scale(m), LE))
            cons.append(LinearConstraint(-xi - nu.scale(m), LE))
        region = PolyhedralSet(n + 1, [A.embed(n + 1, range(n)).intersect(cons) for A in D.parts], h)
        ok, _ = term_equals_pwa(t_ext, ext_gens, g_ext, region)
        if ok:
            lifted = simplify(_nu_substitute(t, m, nu_term(n, nu0)))
            ok, x = term_equals_pwa(lifted, gens, g, D)
            if not ok:
                raise VerificationError("lifted term differs from g", x)
            return lifted, nu0
    raise CapExhaustedError("cap exhausted searching nu0", last_tried=unit.scale(1 << cap))


# --------------------------------------------------------------------------
# Lipschitz synthesis pipeline


def _is_closed(D: PolyhedralSet) -> bool:
    return is_subset(closure(D), D)


def _homogeneous(g: PwaFunction, gens, D: PolyhedralSet) -> bool:
    consts = [f.const for f in gens]
    for P, f in g.pieces:
        consts.append(f.const)
        consts.extend(c.affine.const for c in P.constraints)
    for P in D.parts:
        consts.extend(c.affine.const for c in P.constraints)
    return all(c.is_zero() for c in consts)


@dataclass
class _Trace:
    steps: list = field(default_factory=list)

    def add(self, *item):
        self.steps.append(item)


def synth_lipschitz(g: PwaFunction, gens: Sequence[AffineFunction], D=None, M: int | None = None,
                    config: SearchConfig = DEFAULT, trace: list | None = None) -> LatticeTerm:
    """(l,+)-term over gens, coordinates and constants equal to g on D (verified)."""
    gens = list(gens)
    if D is None:
        D = g.domain
        _check_domain(g, gens, None)
        gD = g
    else:
        D = as_set(D)
        _check_domain(g, gens, D)
        gD = g.restrict(D)
    ok, info = is_w_combination(gD, gens)
    if not ok:
        raise NotWCombinationError("g is not a w-combination of the generators", witness=info)
    if M is not None:
        ok, pair = is_lipschitz_with(gD, M)
        if not ok:
            raise NotLipschitzError(f"g is not Lipschitz with constant {M}", witness=pair)
    tr = _Trace()
    term = None
    if config.shortcut:
        res = _min_max(gD, gens, D)
        if res.accepted:
            tr.add("min-max shortcut", res.s_min)
            term = res.term
    if term is None:
        term = simplify(_synth(gD, gens, D, config, tr, allow_infinitesimal=True))
    ok, x = term_equals_pwa(term, gens, gD, D)
    if not ok:
        raise VerificationError("synthesized term differs from g", x)
    if trace is not None:
        trace.extend(tr.steps)
    return term


def _synth(g, gens, D, cfg, tr, allow_infinitesimal) -> LatticeTerm:
    if not _is_closed(D):
        tr.add("closure")
        g = extend_to_closure(g)
        D = closure(D)
    if not is_bounded(D):
        if allow_infinitesimal and _homogeneous(g, gens, D):
            tr.add("infinitesimal")
            g1 = g.raise_height(1)
            gens1 = [f.raise_height(1) for f in gens]
            D1 = D.raise_height(1)
            t = _synth_unbounded(g1, gens1, D1, cfg, tr, nu_level=g1.height - 1)
            return map_constants(t, lambda c: Const(c.quotient(1)))
        return _synth_unbounded(g, gens, D, cfg, tr, nu_level=0)
    return _synth_bounded(g, gens, D, cfg, tr)


def _synth_unbounded(g, gens, D, cfg, tr, nu_level) -> LatticeTerm:
    n, h = g.dim, g.height
    g1 = g.raise_height(1, at_front=True)
    gens1 = [f.raise_height(1, at_front=True) for f in gens]
    rho = GroupElement.unit(h + 1, 0)
    box = Polyhedron.box([-rho] * n, [rho] * n, h + 1)
    Z = PolyhedralSet(n, [P & box for P in D.raise_height(1, at_front=True).parts if feasible(P & box)], h + 1)
    tr.add("truncate", n, h)
    t = _synth_bounded(g1.restrict(Z), gens1, Z, cfg, tr)
    lifted, nu0 = lift_truncated_term(t, g, gens, D, nu_level, cfg.cap_doublings)
    tr.add("lift", nu0)
    return lifted


def _synth_bounded(g, gens, D, cfg, tr) -> LatticeTerm:
    n, r = g.dim, g.height
    if not g.pieces:
        return Const(GroupElement.zero(r))
    if r >= 2:
        gq = g.quotient(1)
        gensq = [f.quotient(1) for f in gens]
        Dq = D.quotient(1)
        tau_q = _synth_bounded(gq, gensq, Dq, cfg, tr)
        tau = map_constants(tau_q, lambda c: Const(c.raise_height(1)))
        T = term_to_pwa(tau, gens, D)
        gp = g - T
        for P, f in gp.pieces:
            fq = f.quotient(1)
            Pq = P.quotient(1)
            if feasible(Pq.intersect(LinearConstraint(fq, LT))) or feasible(Pq.intersect(LinearConstraint(-fq, LT))):
                raise VerificationError("height reduction left values outside the smallest convex subgroup")
        nf_tau = normalize(tau, gens, n, r)
        prov = nf_tau.provenance()
        candidates = []
        seen = set()
        for i, f in enumerate(gens):
            for a in nf_tau.affines():
                d = f - a
                if d not in seen:
                    seen.add(d)
                    candidates.append((d, Add(Gen(i), Neg(prov[a]))))
        tr.add("height reduction", r)
        return Add(tau, _cells_term(gp, candidates, D, cfg, tr))
    candidates = []
    seen = set()
    for i, f in enumerate(gens):
        if f not in seen:
            seen.add(f)
            candidates.append((f, Gen(i)))
    return _cells_term(g, candidates, D, cfg, tr)


def _agrees_on(P: Polyhedron, f: AffineFunction, A: AffineFunction) -> bool:
    d = f - A
    if not any(d.coeffs) and d.const.is_zero():
        return True
    return not (feasible(P.intersect(LinearConstraint(d, LT))) or feasible(P.intersect(LinearConstraint(-d, LT))))


def _cells_term(g: PwaFunction, candidates, D: PolyhedralSet, cfg: SearchConfig, tr) -> LatticeTerm:
    """Steps (d)-(e): cells, separating functions, min/max over the extended list."""
    n = g.dim
    if n == 0:
        v = g(())
        for f, t in candidates:
            if f(()) == v:
                return t
        raise VerificationError("no generator matches g at the origin")
    fns = []
    for P, _ in g.pieces:
        fns.extend(c.affine for c in P.constraints)
    cells = linear_decomposition(D, fns, pairwise=False)
    sd = make_special(cells, cfg.cap_doublings)
    cc = closed_cells(sd)
    cell_fns = []
    for C in cc:
        s = C.cell.sample()
        A = next(f for P, f in g.pieces if P.contains(s))
        match = next(((f, t) for f, t in candidates if _agrees_on(C.polyhedron, f, A)), None)
        if match is None:
            raise VerificationError("no generator equals g on a closed cell", C)
        cell_fns.append(match)
    tr.add("cells", len(cells), len(cc))
    ext: dict = {}
    for f, t in cell_fns:
        ext.setdefault(f, t)
    certs: dict = {}
    pair_fns = {}
    for b in range(len(cc)):
        for a in range(len(cc)):
            if a == b:
                continue
            GB, tB = cell_fns[b]
            GA, tA = cell_fns[a]
            cert = None
            if (a, b) in certs:
                c = certs[(a, b)]
                cert = SeparationCertificate(-c.H, -c.a, c.second, c.first)
            sep = _separator(cc[b], GB, cc[a], GA, cfg, cert, certs, (b, a))
            e, form = sep.fn, sep.form
            if form[0] == "own":
                term = tB
            elif form[0] == "other":
                term = tA
            elif form[0] == "shift":
                term = Add(tB, IntScale(form[1], affine_as_term(sep.cert.level)))
            else:
                k, bnd = form[1]
                term = Const(bnd) if k == 0 else Add(IntScale(k, affine_as_term(sep.cert.level)), Const(bnd))
            ext.setdefault(e, term)
            pair_fns[(b, a)] = e
    tr.add("separators", len(ext))
    affs = list(ext)
    terms = [ext[f] for f in affs]
    if len(affs) <= cfg.max_minmax_generators:
        res = _min_max(g, affs, D)
        if not res.accepted:
            raise VerificationError("min/max synthesis rejected an instance with separating functions", res.witness)
        return substitute_gens(res.term, terms)
    index = {f: i for i, f in enumerate(affs)}
    outer = []
    for b in range(len(cc)):
        inner = [index[cell_fns[b][0]]]
        for a in range(len(cc)):
            if a != b:
                j = index[pair_fns[(b, a)]]
                if j not in inner:
                    inner.append(j)
        outer.append(min_of(terms[j] for j in sorted(inner)))
    return max_of(outer)


def _separator(B: ClosedCell, GB, A: ClosedCell, GA, cfg, cert, certs, key):
    def hyperplane():
        c = cert
        if c is None:
            c = separating_hyperplane(B, A, cfg.cap_doublings, cfg.hyperplane_budget)
        certs[key] = c
        return c
    return build_separating_function(B, GB, A, GA, cfg.cap_doublings, cert=hyperplane)
