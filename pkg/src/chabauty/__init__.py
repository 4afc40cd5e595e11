"""Approximability of locally compact abelian groups by copies of Z and R
in the Chabauty space of closed subgroups: symbolic deciders with proof
traces, witness recipes, and an exact rational lab for verifying the
convergence constructions on desk-scale concrete groups."""

from .classify import (
    InternalInconsistency,
    NotApproximable,
    classify_compact_free,
    classify_integral,
    classify_numeral,
    witness_recipe,
)
from .duality import DualUnrepresentable, dual, dual_defined
from .grammar import (
    GroupExpr,
    Heights,
    ParseError,
    PrimeError,
    normalize,
    parse,
    render,
)
from .structure import (
    NotCompact,
    StructureReport,
    comp_part,
    flags,
    identity_component,
    is_inductively_monothetic,
    is_monothetic_compact,
    vector_split,
)
from .verdict import CITATIONS, CertificatePlan, TraceStep, Verdict

__version__ = "0.1.0"

__all__ = [
    "CITATIONS",
    "CertificatePlan",
    "DualUnrepresentable",
    "GroupExpr",
    "Heights",
    "InternalInconsistency",
    "NotApproximable",
    "NotCompact",
    "ParseError",
    "PrimeError",
    "StructureReport",
    "TraceStep",
    "Verdict",
    "__version__",
    "classify_compact_free",
    "classify_integral",
    "classify_numeral",
    "comp_part",
    "dual",
    "dual_defined",
    "flags",
    "identity_component",
    "is_inductively_monothetic",
    "is_monothetic_compact",
    "normalize",
    "parse",
    "render",
    "vector_split",
    "witness_recipe",
]
