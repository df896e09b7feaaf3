"""Finite-algebra engine for coverings, centralization and higher central extensions."""

from .algebra import (
    AlgebraError,
    Cone,
    Congruence,
    FiniteAlgebra,
    Homomorphism,
    RelationSpan,
    are_permutable,
    check_homomorphism,
    coequalizer,
    congruence_generated,
    kernel_pair,
    pullback,
    quotient_by_congruence,
    relation_compose,
    validate_algebra,
)
from .category import ExtSquare, ExtTower, is_in_E1, tower_depth
from .commutator import (
    CommutatorQuery,
    abelianization_reflector,
    is_abelian_object,
    maltsev_audit,
    smith_commutator,
)
from .corpus import build_corpus
from .galois import (
    DiscreteFibrationDatum,
    GaloisStructure,
    abelianization_structure,
    apply_reflector,
    boolean_structure,
    centralize,
    centralize_via_commutator,
    identity_structure,
    is_covering,
    is_discrete_fibration,
    is_n_fold_central,
    is_trivial_covering,
    lift_structure,
)
from .varieties import (
    boolean_reflection,
    center,
    group_central_oracle,
    relative_commutator_subgroup,
)


__all__ = [
    "AlgebraError",
    "Cone",
    "Congruence",
    "FiniteAlgebra",
    "Homomorphism",
    "RelationSpan",
    "are_permutable",
    "check_homomorphism",
    "coequalizer",
    "congruence_generated",
    "kernel_pair",
    "pullback",
    "quotient_by_congruence",
    "relation_compose",
    "validate_algebra",
    "ExtSquare",
    "ExtTower",
    "is_in_E1",
    "tower_depth",
    "CommutatorQuery",
    "abelianization_reflector",
    "is_abelian_object",
    "maltsev_audit",
    "smith_commutator",
    "build_corpus",
    "DiscreteFibrationDatum",
    "GaloisStructure",
    "abelianization_structure",
    "apply_reflector",
    "boolean_structure",
    "centralize",
    "centralize_via_commutator",
    "identity_structure",
    "is_covering",
    "is_discrete_fibration",
    "is_n_fold_central",
    "is_trivial_covering",
    "lift_structure",
    "boolean_reflection",
    "center",
    "group_central_oracle",
    "relative_commutator_subgroup",
]
