"""quadfock: exact and floating-point computation in the quadratic Fock space.

Inner products of n-particle and exponential vectors, quadratic
quantization of weighted-composition operators, and executable checks of
the self-adjointness characterization, the contraction necessary
condition, and the dilation counter-example.
"""

from .errors import (
    DomainError,
    NonInjectiveError,
    NotHermitianError,
    QuadFockError,
    UnconvergedError,
)
from .fock import (
    FockConfig,
    MomentSequence,
    NParticleTable,
    exp_inner_closed,
    exp_inner_closed_scaled,
    exp_inner_series,
    exp_vector_exists,
    gram_matrix,
    gram_min_eig,
    is_psd,
    moments,
    n_particle_inner_partition,
    n_particle_inner_rec,
    n_particle_table,
    partition_coefficient,
    partition_terms,
    partitions_multiplicity,
)
from .quantization import (
    CounterexampleReport,
    QuadOperator,
    SelfAdjointNumericReport,
    SelfAdjointReport,
    adjoint_operator,
    apply_operator,
    check_contraction_gram,
    check_homomorphism_powers,
    check_l2_contraction,
    check_selfadjoint_numeric,
    check_selfadjoint_structure,
    counterexample_report,
    dilation_operator,
    gamma2_matrix_element,
    lemma4_derivative_check,
    window_radius,
)
from .scalars import ExactComplex
from .stepfn import (
    IntervalSet,
    PiecewiseAffineMap,
    StepFunction,
    compose,
    inner,
    is_measure_preserving,
    map_compose,
    map_invert,
    restrict,
)

__all__ = [
    "CounterexampleReport",
    "DomainError",
    "ExactComplex",
    "FockConfig",
    "IntervalSet",
    "MomentSequence",
    "NParticleTable",
    "NonInjectiveError",
    "NotHermitianError",
    "PiecewiseAffineMap",
    "QuadFockError",
    "QuadOperator",
    "SelfAdjointNumericReport",
    "SelfAdjointReport",
    "StepFunction",
    "UnconvergedError",
    "adjoint_operator",
    "apply_operator",
    "check_contraction_gram",
    "check_homomorphism_powers",
    "check_l2_contraction",
    "check_selfadjoint_numeric",
    "check_selfadjoint_structure",
    "compose",
    "counterexample_report",
    "dilation_operator",
    "exp_inner_closed",
    "exp_inner_closed_scaled",
    "exp_inner_series",
    "exp_vector_exists",
    "gamma2_matrix_element",
    "gram_matrix",
    "gram_min_eig",
    "inner",
    "is_measure_preserving",
    "is_psd",
    "lemma4_derivative_check",
    "map_compose",
    "map_invert",
    "moments",
    "n_particle_inner_partition",
    "n_particle_inner_rec",
    "n_particle_table",
    "partition_coefficient",
    "partition_terms",
    "partitions_multiplicity",
    "restrict",
    "window_radius",
]

__version__ = "0.1.0"
