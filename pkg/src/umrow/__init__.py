"""Desk-scale workbench: elementary symplectic/orthogonal action on unimodular rows
over monoid rings, with replayable reduction transcripts."""

from .errors import (
    CarrierMismatchError,
    ContainmentError,
    DegenerateDecompositionError,
    DeskScaleLimitError,
    InvalidTokenError,
    NotInteriorDualError,
    ParseError,
    PositivityRequiredError,
    PreconditionError,
    UmrowError,
    UnsupportedMonoidError,
    UnsupportedRingError,
)
from .rings import (
    ExcisionRing,
    Ideal,
    IntegerRing,
    ModRing,
    QQ,
    RationalRing,
    Ring,
    RingElement,
    ZZ,
    excision_project,
    is_in_jacobson_radical,
    ring_add,
    ring_inverse,
    ring_mul,
    ring_neg,
)
from .monoids import (
    AffineMonoid,
    PyramidalDecomposition,
    RationalCone,
    SectionPolytope,
    SeminormalityResult,
    complexity,
    default_section,
    extremal_generators,
    free_monoid,
    hilbert_basis,
    interior,
    is_normal,
    is_phi_simplicial,
    is_seminormal,
    monoid_membership,
    numeric_monoid,
    pyramidal_decomposition,
    section_polytope,
    star_submonoid,
    submonoid_of_polytope,
)
from .monoid_ring import (
    DegreeAssignment,
    LeadingTerm,
    MonoidRing,
    MonoidRingElement,
    MULTI_TERM,
    TiltedAlgebraDescriptor,
    evaluate_at_t1_zero,
    is_monic_in,
    leading_term,
    nagata_twist,
    t1_weight,
    tilted_membership,
)
from .groups import (
    GE,
    Conjugate,
    FormKind,
    GroupWord,
    ORTHOGONAL,
    SEShort,
    SYMPLECTIC,
    SquareMatrix,
    act_on_row,
    empty_word,
    inner_product,
    is_in_group,
    sigma,
    standard_form,
    token_matrix,
    word_in_relative_subgroup,
    word_matrix,
)
from .reduction import (
    CarrierMap,
    MonicTwistResult,
    ReductionTranscript,
    SearchBudget,
    UnimodularRow,
    bounded_orbit_search,
    check_unimodular,
    excision_collapse_map,
    lift_word,
    mod_projection,
    monic_then_reduce,
    pivot_reduce,
    reduce_mod_radical,
    reduce_over_field,
    reduce_relative,
    reduce_semilocal,
    stabilization_descent,
    standard_basis_row,
    transform_witness,
)

__version__ = "0.1.0"
