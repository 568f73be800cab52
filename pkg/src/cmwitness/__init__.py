"""cmwitness: exact classification of the integral closure of S[w, u].

S is Z[x1..xn] localized at (2, x1..xn) and A = S[w, u] with w^2 = f,
u^2 = g.  The package decides where (f, g) falls in the case map for
the integral closure R of A, builds R's generators and multiplication
table, verifies conductor and free-resolution data, and in the
non-Cohen-Macaulay cases machine-checks a certificate that R still
admits a birational small Cohen-Macaulay module.

Everything is exact: sparse integer polynomials, fraction-free linear
algebra, and GF(2) residue computations.  No floating point, no
randomized decision procedures (randomness appears only in test-side
spot checks with fixed seeds).
"""

from .errors import (
    BoundTooLargeError,
    CaseConflictError,
    CmWitnessError,
    HypothesisViolationError,
    InternalVerificationError,
    LiftInvalidError,
    MalformedSequenceError,
    MissingCertificateError,
    NotClosedError,
    UnsupportedError,
    UnverifiedComplexError,
    WitnessMismatchError,
    WrongCaseError,
    ZeroInputError,
)
from .poly import (
    BaseRing,
    F2Poly,
    Poly,
    PolyParseError,
    UnknownVariableError,
    divide_exact,
    format_poly,
    is_divisible,
    is_even,
    lift_f2,
    parse_poly,
    partial_derivative,
    reduce_mod2,
    sqrt_f2,
    substitute_ints,
)
from .gcd import gcd_f2, gcd_many_q, gcd_q, gcd_z, is_ring_square, poly_sqrt_z
from .linalg import (
    DimensionMismatchError,
    PolyFraction,
    RationalMatrix,
    SpanNotFreeError,
    bareiss_rank,
    fraction_kernel,
    generic_rank,
    poly_det,
    solve_fraction_system,
)
from .predicates import (
    QShape,
    S2Witness,
    S2w4Witness,
    decompose_S2,
    degree_four_check,
    ideal_Q_classify,
    in_S2wedge4,
    is_squarefree,
    product_in_S2wedge4,
    regular_sequence_certificate,
    satisfies_A1,
)
from .algebra import (
    AlgebraDesc,
    IdealGens,
    KElement,
    MembershipOracle,
    MultiplicationTable,
    a_membership,
    a_oracle,
    bounded_colon_search,
    colon_membership,
    colon_oracle,
    express_in_span,
    ideal_product,
    k_mul,
    make_algebra,
    min_poly_check,
    span_closure_check,
)
from .homology import (
    FreeComplex,
    GradeCertificate,
    be_exactness_check,
    check_composition_zero,
    kernel_saturation_check,
    minor_ideal_generators,
    pd_depth_report,
    resolution_of_I,
    resolution_of_S_mod_Q,
    standard_grade_certificates,
)
from .classifier import (
    CASE_A_BOTH,
    CASE_A_ONE,
    CASE_B,
    CASE_C_CM,
    CASE_C_NONCM_GRADE2,
    CASE_C_NONCM_GRADE3,
    CASE_TAGS,
    OUTSIDE_SCOPE,
    CmModuleCertificate,
    ConductorReport,
    RingPresentation,
    build_R,
    build_small_cm_certificate,
    classify,
    conductor,
    presentation_complex,
    q_shape,
)
from .report import DEFAULT_OPTIONS, assemble_report, parse_job, render_json

__version__ = "0.1.0"

__all__ = [
    "AlgebraDesc",
    "BaseRing",
    "BoundTooLargeError",
    "CASE_A_BOTH",
    "CASE_A_ONE",
    "CASE_B",
    "CASE_C_CM",
    "CASE_C_NONCM_GRADE2",
    "CASE_C_NONCM_GRADE3",
    "CASE_TAGS",
    "CaseConflictError",
    "CmModuleCertificate",
    "CmWitnessError",
    "ConductorReport",
    "DEFAULT_OPTIONS",
    "DimensionMismatchError",
    "F2Poly",
    "FreeComplex",
    "GradeCertificate",
    "HypothesisViolationError",
    "IdealGens",
    "InternalVerificationError",
    "KElement",
    "LiftInvalidError",
    "MalformedSequenceError",
    "MembershipOracle",
    "MissingCertificateError",
    "MultiplicationTable",
    "NotClosedError",
    "OUTSIDE_SCOPE",
    "Poly",
    "PolyFraction",
    "PolyParseError",
    "QShape",
    "RationalMatrix",
    "RingPresentation",
    "S2Witness",
    "S2w4Witness",
    "SpanNotFreeError",
    "UnknownVariableError",
    "UnsupportedError",
    "UnverifiedComplexError",
    "WitnessMismatchError",
    "WrongCaseError",
    "ZeroInputError",
    "a_membership",
    "a_oracle",
    "assemble_report",
    "bareiss_rank",
    "be_exactness_check",
    "bounded_colon_search",
    "build_R",
    "build_small_cm_certificate",
    "check_composition_zero",
    "classify",
    "colon_membership",
    "colon_oracle",
    "conductor",
    "decompose_S2",
    "degree_four_check",
    "divide_exact",
    "express_in_span",
    "format_poly",
    "fraction_kernel",
    "gcd_f2",
    "gcd_many_q",
    "gcd_q",
    "gcd_z",
    "generic_rank",
    "ideal_Q_classify",
    "ideal_product",
    "in_S2wedge4",
    "is_divisible",
    "is_even",
    "is_ring_square",
    "is_squarefree",
    "k_mul",
    "kernel_saturation_check",
    "lift_f2",
    "make_algebra",
    "min_poly_check",
    "minor_ideal_generators",
    "parse_job",
    "parse_poly",
    "partial_derivative",
    "pd_depth_report",
    "poly_det",
    "poly_sqrt_z",
    "presentation_complex",
    "product_in_S2wedge4",
    "q_shape",
    "reduce_mod2",
    "regular_sequence_certificate",
    "render_json",
    "resolution_of_I",
    "resolution_of_S_mod_Q",
    "satisfies_A1",
    "solve_fraction_system",
    "span_closure_check",
    "sqrt_f2",
    "standard_grade_certificates",
    "substitute_ints",
]
