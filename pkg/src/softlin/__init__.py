"""Soft sets, soft vector spaces and soft normed spaces over a finite parameter set.

Every soft object is stored densely: one crisp value per parameter label, in
label order.  Most operations act parameter by parameter.
"""

from .core import (
    DEFAULT_TOL,
    ParameterSet,
    Relation,
    SetKind,
    SoftElement,
    SoftInputError,
    SoftReal,
    SoftScalar,
    SoftSet,
    SoftVector,
    SoftVectorSpace,
    TriState,
    UnsupportedRepresentationError,
    contains_element,
    difference,
    intersection,
    soft_complement,
    soft_real_arith,
    soft_real_compare,
    soft_set_algebra,
    soft_set_relate,
    union,
)
from .linear import (
    IndependenceVerdict,
    coordinates,
    intersect_spaces,
    is_basis,
    is_linearly_independent,
    is_soft_subspace,
    is_soft_vector_space,
    linear_combination,
    scale_soft_set,
    standard_basis,
    sum_soft_sets,
    translate_soft_set,
    vector_arith,
)
from .norm import (
    INF,
    P1,
    P2,
    AxiomReport,
    BallKind,
    BallSpec,
    EquivalenceConstants,
    NormDescriptor,
    NormFamily,
    PInf,
    PreconditionError,
    ball_membership,
    equivalence_constants,
    eval_norm,
    extend_crisp,
    independence_constant,
    induced_metric,
    riesz_witness,
    verify_metric_axioms,
    verify_norm_axioms,
    weighted,
)
from .seq import (
    CauchyReport,
    Combined,
    ConvergenceVerdict,
    Generated,
    NotCauchyError,
    Status,
    Tabulated,
    check_cauchy_bounded,
    check_convergence,
    combine_sequences,
    construct_limit,
    is_bounded_soft_set,
    scalar_sequence,
    subspace_closure,
)
from .convex import (
    BallRegion,
    ConvexityReport,
    EmptyRegionError,
    IntersectionRegion,
    PredicateRegion,
    SubspaceRegion,
    check_convex,
    intersect_regions,
    segment_point,
)

__version__ = "0.1.0"
