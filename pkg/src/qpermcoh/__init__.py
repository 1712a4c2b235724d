"""Exact computations for quantum permutation algebras.

Presentations of ``A_s(n)``, ``A_s(n, d)`` and ``A_h^p(n)``, normal forms by
truncated completion, low-degree Hochschild cohomology with trivial
coefficients, and a certificate that every normalised 2-cocycle of
``A_s(n, d)`` is a coboundary.
"""

from .cocycle import (
    ConstraintSpan,
    Cocycle,
    FunctionalExpr,
    FunctionalSym,
    Functional,
    H2Certificate,
    RhoMap,
    T3Elem,
    certify_h2_vanishing,
    character,
    counit,
    delta1,
    derive_identity_span,
    extract_primitive,
    normalize_cocycle,
    primitive,
    replay_lemma52,
    star_constraint,
    t3_multiply,
    verify_coboundary,
)
from .errors import (
    CheckFailed,
    DimensionMismatch,
    IdentityNotDerivable,
    IllFormed,
    InconsistentAugmentation,
    InsufficientCompletion,
    MissingImage,
    NonOrientable,
    NotACocycle,
    NotAnAutomorphism,
    NotSquare,
    ParseError,
    QPermError,
    RelationFails,
    RepresentativeMismatch,
    UnstableWindow,
    WindowTooSmall,
)
from .lowcoh import CohReport, h2_truncated, linear_part_system, low_degree_cohomology
from .ncalg import Gen, NCPoly, Q, TensorElem, apply_gen_map, multiply, reverse, tensor_multiply, u
from .presentations import (
    MatrixSpec,
    Presentation,
    QuotientAlgebra,
    build_ahp,
    build_as,
    build_asd,
    cycle_graph_adjacency,
    hopf_well_definedness,
    permutation_character,
    petersen_adjacency,
    quotient,
)
from .rewrite import RewriteRule, RewriteSystem, complete, ideal_member, normal_form

__version__ = "0.1.0"

__all__ = [
    "CheckFailed",
    "Cocycle",
    "CohReport",
    "ConstraintSpan",
    "DimensionMismatch",
    "Functional",
    "FunctionalExpr",
    "FunctionalSym",
    "Gen",
    "H2Certificate",
    "IdentityNotDerivable",
    "IllFormed",
    "InconsistentAugmentation",
    "InsufficientCompletion",
    "MatrixSpec",
    "MissingImage",
    "NCPoly",
    "NonOrientable",
    "NotACocycle",
    "NotAnAutomorphism",
    "NotSquare",
    "ParseError",
    "Presentation",
    "Q",
    "QPermError",
    "QuotientAlgebra",
    "RelationFails",
    "RepresentativeMismatch",
    "RewriteRule",
    "RewriteSystem",
    "RhoMap",
    "T3Elem",
    "TensorElem",
    "UnstableWindow",
    "WindowTooSmall",
    "apply_gen_map",
    "build_ahp",
    "build_as",
    "build_asd",
    "certify_h2_vanishing",
    "character",
    "complete",
    "counit",
    "cycle_graph_adjacency",
    "delta1",
    "derive_identity_span",
    "extract_primitive",
    "h2_truncated",
    "hopf_well_definedness",
    "ideal_member",
    "linear_part_system",
    "low_degree_cohomology",
    "multiply",
    "normal_form",
    "normalize_cocycle",
    "permutation_character",
    "petersen_adjacency",
    "primitive",
    "quotient",
    "replay_lemma52",
    "reverse",
    "star_constraint",
    "t3_multiply",
    "tensor_multiply",
    "u",
    "verify_coboundary",
]
