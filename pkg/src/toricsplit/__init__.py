"""Exact splitting behaviour of equivariant vector bundles on smooth complete toric varieties."""

from .bundle_data import (
    EulerBundleSpec,
    KaneyamaBundleData,
    assemble_bundle,
    cp2_rank2,
    euler_monomial_spec,
    euler_splitting_system,
    format_bundle,
    format_euler,
    load_bundle,
    make_euler_spec,
    parse_bundle,
    parse_euler,
    tangent_bundle,
    validate,
)
from .exact_linear import IntMatrix, hnf, solve_integral
from .fan import Fan, Wall, format_fan, make_fan, parse_fan, projective_space, walls
from .intersection import (
    AugmentedIntersectionMatrix,
    SignClass,
    apply_q,
    augmented_matrix,
    principal_columns,
    sign_of_class,
)
from .solver import SplittingType, canonical_class_rep, find_splitting_types
from .splitting import (
    SplittingSystem,
    WallRestriction,
    bootstrap,
    format_system,
    h0_oracle,
    restrict,
    splitting_system,
    transition_from_block,
    twist_system,
)
from .surface_graph import (
    WeightedCircularGraph,
    blowup,
    canonical_form,
    cp2,
    enumerate_blowups,
    graph_to_fan,
    hirzebruch,
)

__all__ = [
    "AugmentedIntersectionMatrix",
    "EulerBundleSpec",
    "Fan",
    "IntMatrix",
    "KaneyamaBundleData",
    "SignClass",
    "SplittingSystem",
    "SplittingType",
    "Wall",
    "WallRestriction",
    "WeightedCircularGraph",
    "apply_q",
    "assemble_bundle",
    "augmented_matrix",
    "blowup",
    "bootstrap",
    "canonical_class_rep",
    "canonical_form",
    "cp2",
    "cp2_rank2",
    "enumerate_blowups",
    "euler_monomial_spec",
    "euler_splitting_system",
    "find_splitting_types",
    "format_bundle",
    "format_euler",
    "format_fan",
    "format_system",
    "graph_to_fan",
    "h0_oracle",
    "hirzebruch",
    "hnf",
    "load_bundle",
    "make_euler_spec",
    "make_fan",
    "parse_bundle",
    "parse_euler",
    "parse_fan",
    "principal_columns",
    "projective_space",
    "restrict",
    "sign_of_class",
    "solve_integral",
    "splitting_system",
    "tangent_bundle",
    "transition_from_block",
    "twist_system",
    "validate",
    "walls",
]
