"""Exact piecewise-affine geometry over lexicographic value groups Q^h.

Decides and synthesizes min/max lattice representations of piecewise-affine
functions, computes lattice-normalized volumes and tropicalizes Laurent
polynomials through the Gauss valuation.
"""

from .config import SearchConfig
from .errors import (
    CapExhaustedError, DimensionMismatchError, EmptySetError, HeightMismatchError, InputError,
    NotLipschitzError, NotWCombinationError, PreconditionError, TropilatError, UnsupportedError,
    VerificationError,
)
from .group import AffineFunction, GroupElement, point
from .lattice import (
    Add, Const, Coord, Gen, IntScale, LatticeTerm, Max, Min, Neg, eval_term, format_term, normalize, simplify,
    term_equals_on, term_equals_pwa, term_to_pwa,
)
from .polyhedra import (
    EQ, LE, LT, LinearConstraint, Polyhedron, PolyhedralSet, closure, dimension, eq, fm_eliminate,
    is_convex, is_empty, le, lt, project, sample_point, verify_certificate,
)
from .pwa import (
    PwaFunction, extend_to_closure, formal_max, formal_min, is_lipschitz_with, is_w_combination,
    lipschitz_search,
)
from .celldecomp import (
    closed_cells, linear_decomposition, make_special, separating_function, separating_hyperplane,
)
from .synthesis import SynthesisResult, in_S, lift_truncated_term, synth_lipschitz, synth_min_max
from .volume import Simplex, VolumeProfile, simplex_vol, triangulate, unimodular_transform, vol_n, vol_profile
from .tropical import (
    TropicalPolynomial, TropicalRationalFunction, demo_main_theorem, gauss_eval, to_pwa, trop_add,
    trop_mul,
)

__version__ = "0.1.0"

__all__ = [
    "Add",
    "AffineFunction",
    "CapExhaustedError",
    "Const",
    "Coord",
    "DimensionMismatchError",
    "EQ",
    "EmptySetError",
    "Gen",
    "GroupElement",
    "HeightMismatchError",
    "InputError",
    "IntScale",
    "LE",
    "LT",
    "LatticeTerm",
    "LinearConstraint",
    "Max",
    "Min",
    "Neg",
    "NotLipschitzError",
    "NotWCombinationError",
    "PolyhedralSet",
    "Polyhedron",
    "PreconditionError",
    "PwaFunction",
    "SearchConfig",
    "Simplex",
    "SynthesisResult",
    "TropicalPolynomial",
    "TropicalRationalFunction",
    "TropilatError",
    "UnsupportedError",
    "VerificationError",
    "VolumeProfile",
    "closed_cells",
    "closure",
    "demo_main_theorem",
    "dimension",
    "eq",
    "eval_term",
    "format_term",
    "extend_to_closure",
    "fm_eliminate",
    "formal_max",
    "formal_min",
    "gauss_eval",
    "in_S",
    "is_convex",
    "is_empty",
    "is_lipschitz_with",
    "is_w_combination",
    "le",
    "lift_truncated_term",
    "linear_decomposition",
    "lipschitz_search",
    "lt",
    "make_special",
    "normalize",
    "point",
    "project",
    "sample_point",
    "separating_function",
    "separating_hyperplane",
    "simplex_vol",
    "simplify",
    "synth_lipschitz",
    "synth_min_max",
    "term_equals_on",
    "term_equals_pwa",
    "term_to_pwa",
    "to_pwa",
    "triangulate",
    "trop_add",
    "trop_mul",
    "unimodular_transform",
    "verify_certificate",
    "vol_n",
    "vol_profile",
]
