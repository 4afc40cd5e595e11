"""Exact concrete engine for closed subgroups of R^d x T^t x Z^z x F."""

from .annihilator import (
    ConsistencyReport,
    NotAHomomorphism,
    TooLarge,
    annihilator,
    duality_limit_consistency,
    graph_adjoint_check,
    hom_matrix_is_valid,
    pairing,
    subgroup_lattice_finite,
)
from .exactmath import ExactDistance
from .groups import ConcreteGroup, ConcretePoint, metric
from .neighborhoods import (
    Ball,
    Borderline,
    FiniteSet,
    NeighborhoodSpec,
    ThresholdReport,
    TrivialLimitReport,
    in_U,
    limit_threshold,
    neighborhood,
    test_points,
    trivial_limit_check,
)
from .probes import (
    EpsilonTooLarge,
    IndependenceCertificate,
    ProbeReport,
    ProbeWitness,
    independence_obstruction,
    probe_integral,
)
from .sequences import SEQUENCE_NAMES, builtin_sequence
from .subgroups import (
    BoundTooSmall,
    ClosedSubgroupRep,
    UnsupportedGeometry,
    canonicalize,
    cyclic_subgroup,
    dist_point,
    line_subgroup,
    make_subgroup,
    member,
    phi_R,
    subgroup,
    subgroup_leq,
    subgroup_order,
    trivial_subgroup,
    whole_group,
)

__all__ = [
    "Ball",
    "Borderline",
    "BoundTooSmall",
    "ClosedSubgroupRep",
    "ConcreteGroup",
    "ConcretePoint",
    "ConsistencyReport",
    "EpsilonTooLarge",
    "ExactDistance",
    "FiniteSet",
    "IndependenceCertificate",
    "NeighborhoodSpec",
    "NotAHomomorphism",
    "ProbeReport",
    "ProbeWitness",
    "SEQUENCE_NAMES",
    "ThresholdReport",
    "TooLarge",
    "TrivialLimitReport",
    "UnsupportedGeometry",
    "annihilator",
    "builtin_sequence",
    "canonicalize",
    "cyclic_subgroup",
    "dist_point",
    "duality_limit_consistency",
    "graph_adjoint_check",
    "hom_matrix_is_valid",
    "in_U",
    "independence_obstruction",
    "limit_threshold",
    "line_subgroup",
    "make_subgroup",
    "member",
    "metric",
    "neighborhood",
    "pairing",
    "phi_R",
    "probe_integral",
    "subgroup",
    "subgroup_lattice_finite",
    "subgroup_leq",
    "subgroup_order",
    "test_points",
    "trivial_limit_check",
    "trivial_subgroup",
    "whole_group",
]
