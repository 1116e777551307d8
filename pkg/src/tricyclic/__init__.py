"""Exact weight-distribution toolkit for a family of ternary cyclic codes.

The code of length 3^m - 1 (m even) is given by trace evaluations of the
monomials x^2, x^{p+1}, x^{p^2+1} over F_{3^m}.  The package computes its
weight distribution three independent ways (closed form, quadratic-form rank
classification, direct trace tallies) and cross-verifies every intermediate
identity with exact arithmetic throughout.
"""

from .code import (
    Codeword,
    WeightDistribution,
    classification_census,
    code_dimension,
    codeword,
    collapse_to_codewords,
    cyclotomic_coset,
    dual_distribution_bruteforce,
    enumerate_distribution,
    generator_rank,
    moment_bruteforce,
    weight_direct,
    weight_via_expsum,
)
from .counting import (
    SolutionCount,
    SystemId,
    TableId,
    circle_solutions,
    closed_form_count,
    count_bruteforce,
    variety_count,
)
from .errors import (
    BudgetExceededError,
    ConfigurationError,
    IdentitySystemError,
    IntegrityError,
    InternalInconsistencyError,
    InvalidDistributionError,
    TricyclicError,
)
from .expsum import EisensteinInteger, ExpSumClass, classify, direct_sum, r_sum
from .gf import FieldContext, FieldElement, field_context, quadratic_extension
from .identities import (
    FrequencyCounts,
    IdentityConstants,
    constants,
    dual_low_weights_closed,
    frequency_counts_from_census,
    macwilliams_transform,
    power_moments,
    sixth_moment_solution_count,
    solve_frequencies,
    theorem_table,
    weight_levels,
)
from .quadform import (
    SymmetricMatrix,
    affine_exponential_sum,
    build_form,
    classify_via_legendre,
    diagonalize,
    legendre,
    rank,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "Codeword",
    "ConfigurationError",
    "EisensteinInteger",
    "ExpSumClass",
    "FieldContext",
    "FieldElement",
    "FrequencyCounts",
    "IdentityConstants",
    "IdentitySystemError",
    "IntegrityError",
    "InternalInconsistencyError",
    "InvalidDistributionError",
    "SolutionCount",
    "SymmetricMatrix",
    "SystemId",
    "TableId",
    "TricyclicError",
    "WeightDistribution",
    "affine_exponential_sum",
    "build_form",
    "circle_solutions",
    "classification_census",
    "classify",
    "classify_via_legendre",
    "closed_form_count",
    "code_dimension",
    "codeword",
    "collapse_to_codewords",
    "constants",
    "count_bruteforce",
    "cyclotomic_coset",
    "diagonalize",
    "direct_sum",
    "dual_distribution_bruteforce",
    "dual_low_weights_closed",
    "enumerate_distribution",
    "field_context",
    "frequency_counts_from_census",
    "generator_rank",
    "legendre",
    "macwilliams_transform",
    "moment_bruteforce",
    "power_moments",
    "quadratic_extension",
    "r_sum",
    "rank",
    "sixth_moment_solution_count",
    "solve_frequencies",
    "theorem_table",
    "variety_count",
    "weight_direct",
    "weight_levels",
    "weight_via_expsum",
    "__version__",
]
