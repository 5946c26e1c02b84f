"""JSON encoding of every public object.

Rationals are strings ``"p/q"`` with q > 0; group elements are arrays of
rationals.  Decoders accept plain numbers and ``"p"`` as well, and report
malformed input with a JSON-path-like location.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .celldecomp import Cell, ClosedCell, SeparationCertificate
from .errors import InputError
from .group import AffineFunction, GroupElement
from .lattice import Add, Const, Coord, Gen, IntScale, LatticeTerm, Max, Min, MinMaxNormalForm, Neg
from .polyhedra import (
    EmptinessCertificate, LinearConstraint, Polyhedron, PolyhedralSet, _RELS,
)
from .pwa import PwaFunction
from .tropical import TropicalPolynomial, TropicalRationalFunction


# --------------------------------------------------------------------------
# encoding


def enc_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def enc_element(g: GroupElement) -> list:
    return [enc_rational(c) for c in g.comps]


def enc_point(x) -> list:
    return [enc_element(c) for c in x]


def enc_affine(f: AffineFunction) -> dict:
    return {"coeffs": [enc_rational(c) for c in f.coeffs], "const": enc_element(f.const)}


def _sorted(items: list) -> list:
    return sorted(items, key=lambda d: json.dumps(d, sort_keys=True))


def enc_constraint(c: LinearConstraint) -> dict:
    return {"affine": enc_affine(c.affine), "rel": c.rel}


def enc_polyhedron(P: Polyhedron) -> dict:
    return {"dim": P.dim, "constraints": _sorted([enc_constraint(c) for c in P.constraints])}


def enc_set(S: PolyhedralSet) -> dict:
    return {"dim": S.dim, "parts": _sorted([enc_polyhedron(P) for P in S.parts])}


def enc_pwa(F: PwaFunction) -> dict:
    return {"dim": F.dim, "pieces": [{"cell": enc_polyhedron(P), "fn": enc_affine(f)} for P, f in F.pieces]}


_OPS = {Min: "min", Max: "max", Add: "add"}


def enc_term(t: LatticeTerm) -> dict:
    if isinstance(t, Const):
        return {"const": enc_element(t.value)}
    if isinstance(t, Coord):
        return {"coord": t.index}
    if isinstance(t, Gen):
        return {"gen": t.index}
    if isinstance(t, Neg):
        return {"op": "neg", "args": [enc_term(t.arg)]}
    if isinstance(t, IntScale):
        return {"op": "scale", "k": t.k, "args": [enc_term(t.arg)]}
    cls = type(t)
    args = []

    def flat(n):
        if isinstance(n, cls):
            flat(n.left)
            flat(n.right)
        else:
            args.append(enc_term(n))

    flat(t)
    return {"op": _OPS[cls], "args": args}


def enc_normal_form(nf: MinMaxNormalForm) -> dict:
    return {"clauses": [[enc_affine(f) for f in c] for c in nf.clauses]}


def enc_certificate(cert: EmptinessCertificate) -> dict:
    if cert.witness is not None:
        return {"empty": False, "witness": enc_point(cert.witness), "part": cert.witness_part}
    return {"empty": True, "refutations": [
        {"part": r.part, "multipliers": [[i, enc_rational(m)] for i, m in r.multipliers]}
        for r in cert.refutations]}


def enc_cell(c: Cell) -> dict:
    if c.base is None:
        return {"kind": "point"}
    out = {"kind": c.kind, "dim": c.dim, "base": enc_cell(c.base)}
    if c.kind == "graph":
        out["fn"] = enc_affine(c.fn)
    else:
        out["lower"] = None if c.lower is None else enc_affine(c.lower)
        out["upper"] = None if c.upper is None else enc_affine(c.upper)
    return out


def enc_separation(cert: SeparationCertificate) -> dict:
    return {"H": enc_affine(cert.H), "a": enc_element(cert.a)}


def enc_trop(F) -> dict:
    if isinstance(F, TropicalRationalFunction):
        return {"numerator": enc_trop(F.numerator), "denominator": enc_trop(F.denominator)}
    return {"dim": F.dim, "terms": [{"exp": list(e), "val": enc_element(v)} for e, v in F.terms.items()]}


def encode(obj):
    """Best-effort generic encoder for nested results."""
    if isinstance(obj, GroupElement):
        return enc_element(obj)
    if isinstance(obj, Fraction):
        return enc_rational(obj)
    if isinstance(obj, AffineFunction):
        return enc_affine(obj)
    if isinstance(obj, Polyhedron):
        return enc_polyhedron(obj)
    if isinstance(obj, PolyhedralSet):
        return enc_set(obj)
    if isinstance(obj, PwaFunction):
        return enc_pwa(obj)
    if isinstance(obj, LatticeTerm):
        return enc_term(obj)
    if isinstance(obj, Cell):
        return enc_cell(obj)
    if isinstance(obj, ClosedCell):
        return {"cell": enc_cell(obj.cell), "closure": enc_polyhedron(obj.polyhedron)}
    if isinstance(obj, (TropicalPolynomial, TropicalRationalFunction)):
        return enc_trop(obj)
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return obj


def dumps(doc, pretty: bool = False) -> str:
    return json.dumps(doc, indent=2 if pretty else None, sort_keys=False, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# decoding


class Decoder:
    """Decoders sharing a default height for scalar constants."""

    def __init__(self, height: int | None = None):
        self.height = height

    def rational(self, v, path="$") -> Fraction:
        if isinstance(v, bool):
            raise InputError("expected a rational, got a boolean", path)
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, str):
            try:
                return Fraction(v.strip())
            except (ValueError, ZeroDivisionError):
                raise InputError(f"not a rational: {v!r}", path) from None
        if isinstance(v, float):
            raise InputError("floats are not accepted; write rationals as \"p/q\"", path)
        raise InputError(f"expected a rational, got {type(v).__name__}", path)

    def element(self, v, path="$") -> GroupElement:
        if isinstance(v, list):
            if not v:
                raise InputError("empty group element", path)
            comps = [self.rational(c, f"{path}[{i}]") for i, c in enumerate(v)]
            if self.height is not None and len(comps) != self.height:
                raise InputError(f"expected height {self.height}, got {len(comps)}", path)
            return GroupElement(comps)
        q = self.rational(v, path)
        return GroupElement.of(q, self.height or 1)

    def point(self, v, path="$") -> tuple:
        self._list(v, path)
        return tuple(self.element(c, f"{path}[{i}]") for i, c in enumerate(v))

    def _list(self, v, path):
        if not isinstance(v, list):
            raise InputError("expected an array", path)

    def _obj(self, v, path, *keys):
        if not isinstance(v, dict):
            raise InputError("expected an object", path)
        for k in keys:
            if k not in v:
                raise InputError(f"missing key {k!r}", path)

    def affine(self, v, path="$", dim=None) -> AffineFunction:
        self._obj(v, path, "coeffs")
        self._list(v["coeffs"], f"{path}.coeffs")
        coeffs = [self.rational(c, f"{path}.coeffs[{i}]") for i, c in enumerate(v["coeffs"])]
        if dim is not None and len(coeffs) != dim:
            raise InputError(f"expected {dim} coefficients, got {len(coeffs)}", f"{path}.coeffs")
        const = self.element(v.get("const", 0), f"{path}.const")
        return AffineFunction(coeffs, const)

    def constraint(self, v, path="$", dim=None) -> LinearConstraint:
        self._obj(v, path, "affine")
        rel = v.get("rel", "le")
        if rel not in _RELS:
            raise InputError(f"unknown relation {rel!r}", f"{path}.rel")
        return LinearConstraint(self.affine(v["affine"], f"{path}.affine", dim), rel)

    def polyhedron(self, v, path="$", dim=None) -> Polyhedron:
        self._obj(v, path, "constraints")
        dim = v.get("dim", dim)
        self._list(v["constraints"], f"{path}.constraints")
        cons = [self.constraint(c, f"{path}.constraints[{i}]", dim) for i, c in enumerate(v["constraints"])]
        if dim is None:
            if not cons:
                raise InputError("cannot infer the dimension of an unconstrained polyhedron", path)
            dim = cons[0].dim
        h = cons[0].affine.height if cons else (self.height or 1)
        if any(c.affine.height != h for c in cons):
            raise InputError("constraints of mixed height", path)
        return Polyhedron(dim, cons, h)

    def set(self, v, path="$") -> PolyhedralSet:
        if isinstance(v, dict) and "constraints" in v:
            P = self.polyhedron(v, path)
            return PolyhedralSet(P.dim, [P], P.height)
        self._obj(v, path, "dim", "parts")
        dim = self._dim(v["dim"], f"{path}.dim")
        self._list(v["parts"], f"{path}.parts")
        parts = [self.polyhedron(p, f"{path}.parts[{i}]", dim) for i, p in enumerate(v["parts"])]
        h = parts[0].height if parts else (self.height or 1)
        if any(p.height != h for p in parts):
            raise InputError("parts of mixed height", path)
        return PolyhedralSet(dim, parts, h)

    def _dim(self, v, path):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise InputError("dimension must be a non-negative integer", path)
        return v

    def pwa(self, v, path="$") -> PwaFunction:
        self._obj(v, path, "dim", "pieces")
        dim = self._dim(v["dim"], f"{path}.dim")
        self._list(v["pieces"], f"{path}.pieces")
        pieces = []
        for i, p in enumerate(v["pieces"]):
            q = f"{path}.pieces[{i}]"
            self._obj(p, q, "cell", "fn")
            pieces.append((self.polyhedron(p["cell"], f"{q}.cell", dim), self.affine(p["fn"], f"{q}.fn", dim)))
        hs = {f.height for _, f in pieces} | {P.height for P, _ in pieces if P.constraints}
        if len(hs) > 1:
            raise InputError("pieces of mixed height", path)
        h = hs.pop() if hs else (self.height or 1)
        pieces = [(P if P.height == h else Polyhedron(dim, (), h), f) for P, f in pieces]
        return PwaFunction(dim, pieces, h)

    def term(self, v, path="$") -> LatticeTerm:
        if not isinstance(v, dict):
            raise InputError("expected a term object", path)
        if "const" in v:
            return Const(self.element(v["const"], f"{path}.const"))
        if "coord" in v:
            return Coord(self._dim(v["coord"], f"{path}.coord"))
        if "gen" in v:
            return Gen(self._dim(v["gen"], f"{path}.gen"))
        self._obj(v, path, "op", "args")
        op = v["op"]
        self._list(v["args"], f"{path}.args")
        args = [self.term(a, f"{path}.args[{i}]") for i, a in enumerate(v["args"])]
        if op in ("neg", "scale"):
            if len(args) != 1:
                raise InputError(f"{op} takes exactly one argument", f"{path}.args")
            if op == "neg":
                return Neg(args[0])
            k = v.get("k")
            if not isinstance(k, int) or isinstance(k, bool):
                raise InputError("scale needs an integer k", f"{path}.k")
            return IntScale(k, args[0])
        cls = {"min": Min, "max": Max, "add": Add}.get(op)
        if cls is None:
            raise InputError(f"unknown op {op!r}", f"{path}.op")
        if not args:
            raise InputError(f"{op} needs at least one argument", f"{path}.args")
        out = args[0]
        for a in args[1:]:
            out = cls(out, a)
        return out

    def trop(self, v, path="$"):
        if isinstance(v, dict) and "numerator" in v:
            self._obj(v, path, "numerator", "denominator")
            return TropicalRationalFunction(self.trop(v["numerator"], f"{path}.numerator"),
                                            self.trop(v["denominator"], f"{path}.denominator"))
        self._obj(v, path, "dim", "terms")
        dim = self._dim(v["dim"], f"{path}.dim")
        self._list(v["terms"], f"{path}.terms")
        terms = {}
        for i, t in enumerate(v["terms"]):
            q = f"{path}.terms[{i}]"
            self._obj(t, q, "exp")
            exp = t["exp"]
            if not isinstance(exp, list) or len(exp) != dim or \
               not all(isinstance(e, int) and not isinstance(e, bool) for e in exp):
                raise InputError(f"exponent must be {dim} integers", f"{q}.exp")
            val = self.element(t.get("val", 0), f"{q}.val")
            key = tuple(exp)
            terms[key] = min(terms[key], val) if key in terms else val
        if not terms:
            raise InputError("empty support", f"{path}.terms")
        return TropicalPolynomial(dim, terms)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}") from None
