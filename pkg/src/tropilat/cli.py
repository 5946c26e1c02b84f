"""Batch command line: one JSON job in, one JSON document out.

Exit codes: 0 decided/accepted, 1 decided negative (witness in the output),
2 input error, 3 search cap exhausted, 4 internal verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import codec
from .celldecomp import closed_cells, linear_decomposition, make_special
from .config import SearchConfig
from .errors import (
    CapExhaustedError, DimensionMismatchError, HeightMismatchError, InputError, PreconditionError,
    TropilatError, UnsupportedError, VerificationError,
)
from .lattice import normalize
from .polyhedra import PolyhedralSet, is_empty, project
from .pwa import is_lipschitz_with, lipschitz_search
from .synthesis import synth_lipschitz, synth_min_max
from .tropical import demo_main_theorem, gauss_eval, to_pwa
from .volume import vol_profile
from .group import GroupElement

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4


class Job:
    def __init__(self, args):
        self.args = args
        self.dec = codec.Decoder(args.height)
        self.config = SearchConfig(cap_doublings=args.cap_doublings)

    def load(self):
        path = self.args.input
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        doc = codec.loads(text)
        if not isinstance(doc, dict):
            raise InputError("the job must be a JSON object")
        return doc

    def require(self, doc, key):
        if key not in doc:
            raise InputError(f"missing key {key!r}")
        return doc[key]


def _domain(job, doc, default):
    return job.dec.set(doc["domain"], "$.domain") if "domain" in doc else default


def cmd_qe(job: Job, doc):
    S = job.dec.set(job.require(doc, "set"), "$.set")
    empty, cert = is_empty(S)
    out = {"empty": empty, "certificate": codec.enc_certificate(cert)}
    if "eliminate" in doc:
        elim = doc["eliminate"]
        if not isinstance(elim, list) or not all(isinstance(i, int) and 0 <= i < S.dim for i in elim):
            raise InputError("eliminate must list variable indices", "$.eliminate")
        keep = [i for i in range(S.dim) if i not in elim]
        parts = [project(P, keep) for P in S.parts]
        out["projection"] = codec.enc_set(PolyhedralSet(len(keep), parts, S.height))
    return EXIT_OK, out


def cmd_lipschitz(job: Job, doc):
    F = job.dec.pwa(job.require(doc, "function"), "$.function")
    if "M" in doc:
        M = doc["M"]
        if not isinstance(M, int) or isinstance(M, bool) or M < 0:
            raise InputError("M must be a non-negative integer", "$.M")
        ok, pair = is_lipschitz_with(F, M)
        out = {"lipschitz": ok, "M": M}
        if not ok:
            out["witness"] = [codec.enc_point(pair[0]), codec.enc_point(pair[1])]
        return (EXIT_OK if ok else EXIT_NEGATIVE), out
    cap = doc.get("cap", 1 << job.config.cap_doublings)
    if not isinstance(cap, int) or cap < 0:
        raise InputError("cap must be a non-negative integer", "$.cap")
    rep = lipschitz_search(F, cap)
    if rep.decided == "lipschitz":
        return EXIT_OK, {"decided": "lipschitz", "M": rep.M}
    return EXIT_CAP, {"decided": "unknown", "cap": rep.cap}


def _gens(job, doc, dim):
    gens = job.require(doc, "gens")
    if not isinstance(gens, list):
        raise InputError("gens must be an array", "$.gens")
    return [job.dec.affine(g, f"$.gens[{i}]", dim) for i, g in enumerate(gens)]


def cmd_synth(job: Job, doc):
    g = job.dec.pwa(job.require(doc, "function"), "$.function")
    gens = _gens(job, doc, g.dim)
    res = synth_min_max(g, gens, _domain(job, doc, None))
    transcript = {k: v for k, v in res.transcript.items() if k != "mismatch"}
    if res.accepted:
        nf = normalize(res.term, gens, g.dim, g.height)
        return EXIT_OK, {"accepted": True, "term": codec.enc_term(res.term),
                         "s_min": [list(X) for X in res.s_min],
                         "normal_form": codec.enc_normal_form(nf), "transcript": transcript}
    x, y = res.witness
    return EXIT_NEGATIVE, {"accepted": False, "witness": [codec.enc_point(x), codec.enc_point(y)],
                           "transcript": transcript}


def cmd_synth_lipschitz(job: Job, doc):
    g = job.dec.pwa(job.require(doc, "function"), "$.function")
    gens = _gens(job, doc, g.dim)
    M = doc.get("M")
    if M is not None and (not isinstance(M, int) or M < 0):
        raise InputError("M must be a non-negative integer", "$.M")
    trace = []
    t = synth_lipschitz(g, gens, _domain(job, doc, None), M, job.config, trace)
    return EXIT_OK, {"term": codec.enc_term(t), "verified": True,
                     "steps": [[s[0]] + [codec.encode(v) for v in s[1:]] for s in trace]}


def cmd_decompose(job: Job, doc):
    S = job.dec.set(job.require(doc, "set"), "$.set")
    fns = [job.dec.affine(f, f"$.fns[{i}]", S.dim) for i, f in enumerate(doc.get("fns", []))]
    cells = linear_decomposition(S, fns)
    out = {"cells": [codec.enc_cell(c) for c in cells]}
    if doc.get("special", False):
        sd = make_special(cells, job.config.cap_doublings)
        out["special"] = [codec.enc_cell(c) for c in sd.cells]
        out["closed_cells"] = [codec.enc_polyhedron(c.polyhedron) for c in closed_cells(sd)]
    return EXIT_OK, out


def cmd_volume(job: Job, doc):
    S = job.dec.set(doc.get("set", doc), "$")
    prof = vol_profile(S)
    return EXIT_OK, {"dim": S.dim, "profile": [[m, codec.enc_rational(v)] for m, v in prof.entries]}


def _value(v: GroupElement):
    return codec.enc_rational(v.comps[0]) if v.height == 1 else codec.enc_element(v)


def cmd_trop(job: Job, doc):
    action = job.args.action
    F = job.dec.trop(job.require(doc, "poly" if action != "demo" else "g"),
                     "$.poly" if action != "demo" else "$.g")
    if action == "eval":
        x = job.dec.point(job.require(doc, "point"), "$.point")
        return EXIT_OK, {"value": _value(gauss_eval(F, x))}
    if action == "pwa":
        region = job.dec.set(doc["region"], "$.region") if "region" in doc else None
        if region is None:
            region = PolyhedralSet.universe(F.dim, job.args.height or 1)
        return EXIT_OK, {"function": codec.enc_pwa(to_pwa(F, region))}
    fs = job.require(doc, "fs")
    if not isinstance(fs, list):
        raise InputError("fs must be an array", "$.fs")
    fs = [job.dec.trop(f, f"$.fs[{i}]") for i, f in enumerate(fs)]
    D = job.dec.set(job.require(doc, "domain"), "$.domain")
    M = job.require(doc, "M")
    res = demo_main_theorem(F, fs, D, M, job.config)
    return EXIT_OK, {"term": codec.enc_term(res.term), "verified": True,
                     "image": codec.enc_set(res.image)}


COMMANDS = {
    "qe": cmd_qe, "lipschitz": cmd_lipschitz, "synth": cmd_synth,
    "synth-lipschitz": cmd_synth_lipschitz, "decompose": cmd_decompose, "volume": cmd_volume,
    "trop": cmd_trop,
}


def _flags(p, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--height", type=int, default=d(None), help="height for scalar constants")
    p.add_argument("--cap-doublings", type=int, default=d(20), help="cap for doubling searches")
    p.add_argument("--seed", type=int, default=d(0), help="accepted for reproducibility; output is deterministic")
    p.add_argument("--pretty", action="store_true", default=d(False), help="indent the JSON output")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropilat", description=__doc__.splitlines()[0])
    _flags(p, False)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        _flags(sp, True)
        if name == "trop":
            sp.add_argument("action", choices=["eval", "pwa", "demo"])
        sp.add_argument("input", help="job JSON file, or - for stdin")
    return p


def _error_doc(kind, err, **extra):
    doc = {"error": kind, "message": str(err)}
    doc.update(extra)
    return doc


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    pretty = args.pretty
    try:
        if args.height is not None and args.height < 1:
            raise InputError("--height must be positive", "--height")
        if args.cap_doublings < 0:
            raise InputError("--cap-doublings must be non-negative", "--cap-doublings")
        job = Job(args)
        code, out = COMMANDS[args.command](job, job.load())
    except (InputError, DimensionMismatchError, HeightMismatchError, UnsupportedError, OSError) as e:
        code, out = EXIT_INPUT, _error_doc("input", e)
    except PreconditionError as e:
        code, out = EXIT_NEGATIVE, _error_doc("precondition", e, witness=codec.encode(_plain(e.witness)))
    except CapExhaustedError as e:
        code, out = EXIT_CAP, _error_doc("cap_exhausted", e, last_tried=codec.encode(_plain(e.last_tried)))
    except VerificationError as e:
        code, out = EXIT_INTERNAL, _error_doc("verification", e)
    except TropilatError as e:
        code, out = EXIT_INPUT, _error_doc("input", e)
    stdout.write(codec.dumps(out, pretty))
    return code


def _plain(w):
    """Witness payloads may hold pieces or matrices; keep only encodable parts."""
    if isinstance(w, (list, tuple)):
        return [_plain(v) for v in w]
    if isinstance(w, (int, str, bool)) or w is None:
        return w
    from fractions import Fraction
    from .group import AffineFunction
    from .polyhedra import Polyhedron
    if isinstance(w, (GroupElement, Fraction, AffineFunction, Polyhedron)):
        return w
    return repr(w)


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
