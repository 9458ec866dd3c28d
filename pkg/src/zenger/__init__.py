"""Dual pairs on unit balls of polyhedral norms.

Given positive weights alpha summing to 1 and a norm equivalent to the sup
norm, there is a point w on the unit sphere and a functional phi of dual
norm 1 with w_k * phi_k = alpha_k.  This package computes such pairs by
conditional gradient ascent on the weighted log utility, certifies them by
recomputing all defining identities, and probes the truncation asymptotics
that govern when the construction survives passage to sequence spaces.
"""

from .core import (
    DimensionMismatch,
    NonPositiveWeight,
    SumMismatch,
    TailVector,
    Tolerances,
    TooLarge,
    ZengerError,
    as_vector,
    project_PN,
    renormalize_weights,
    validate_weights,
)
from .lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    LPError,
    LPResult,
    MaxPivotsExceeded,
    NumericalBreakdown,
    brute_force_vertices,
    solve_lp,
)
from .norms import (
    Block,
    CompositeNorm,
    EquivalenceConstants,
    Example1TailNorm,
    Example2Norm,
    GeneratorBlowup,
    GeneratorSet,
    LPFailure,
    NotPolyhedral,
    RankDeficientNorm,
    SupNorm,
    dual_norm_lmo,
    equivalence_constants,
    eval_norm,
    eval_norm_many,
    generators,
    norm_dimension,
    projection_norm,
)
from .solver import (
    Certificate,
    NonConvergence,
    ZengerPair,
    ZengerProblem,
    brute_force_zenger,
    certify,
    line_search,
    log_utility,
    solve_zenger,
)
from .asymptotics import (
    LiminfReport,
    PnRow,
    PnTable,
    RefutationWitness,
    SearchLimitExceeded,
    example1_refute,
    example2_family,
    geometric_alpha,
    geometric_rule,
    liminf_check,
    pn_table,
    tail_projection_table,
)
from .numrange import (
    HullCheck,
    NotHermitian,
    NotTriangular,
    SupportCurve,
    as_complex_matrix,
    jacobi_eigen,
    spectrum_hull_check,
    support_curve,
    support_function,
)

__version__ = "0.1.0"

__all__ = [
    "Block",
    "Certificate",
    "CompositeNorm",
    "DimensionMismatch",
    "EquivalenceConstants",
    "Example1TailNorm",
    "Example2Norm",
    "GeneratorBlowup",
    "GeneratorSet",
    "HullCheck",
    "INFEASIBLE",
    "LPError",
    "LPFailure",
    "LPResult",
    "LiminfReport",
    "LinearProgram",
    "MaxPivotsExceeded",
    "NonConvergence",
    "NonPositiveWeight",
    "NotHermitian",
    "NotPolyhedral",
    "NotTriangular",
    "NumericalBreakdown",
    "OPTIMAL",
    "PnRow",
    "PnTable",
    "RefutationWitness",
    "SearchLimitExceeded",
    "SumMismatch",
    "SupNorm",
    "SupportCurve",
    "TailVector",
    "Tolerances",
    "TooLarge",
    "UNBOUNDED",
    "ZengerError",
    "ZengerPair",
    "ZengerProblem",
    "as_complex_matrix",
    "as_vector",
    "brute_force_vertices",
    "brute_force_zenger",
    "certify",
    "dual_norm_lmo",
    "equivalence_constants",
    "eval_norm",
    "eval_norm_many",
    "example1_refute",
    "example2_family",
    "generators",
    "geometric_alpha",
    "geometric_rule",
    "jacobi_eigen",
    "liminf_check",
    "line_search",
    "log_utility",
    "norm_dimension",
    "pn_table",
    "project_PN",
    "projection_norm",
    "renormalize_weights",
    "solve_lp",
    "solve_zenger",
    "spectrum_hull_check",
    "support_curve",
    "support_function",
    "tail_projection_table",
    "validate_weights",
]
