"""Exact and numerical calculus for Toeplitz-type operators on Gaussian-weighted
spaces of entire functions: heat transforms, twisted products, truncated
matrix compressions, and remainder-curve verification of their asymptotic
expansions in the weight parameter.
"""

from .multiindex import (
    MultiIndex,
    add as multi_add,
    comp_min,
    count_upto,
    degree,
    enumerate_upto,
    factorial,
    falling_factorial,
    iter_box,
    try_subtract,
    unit,
    validate,
)
from .symbolic import (
    ANTIHOLOMORPHIC,
    HOLOMORPHIC,
    FormalSymbol,
    GaussianRational,
    comb_closed,
    comb_sum,
    format_symbol,
    heat_transform_formal,
    moment_double_closed,
    moment_double_series,
    partial_product_expansion,
    poisson_bracket,
    random_polynomial,
    sharp_formal,
    star_berezin,
)
from .numeric import (
    IllConditionedQuadrature,
    QuadratureRule,
    QuadratureSampleError,
    SampledSymbol,
    complex_exponential,
    cos_re,
    gauss_hermite,
    gaussian_bump,
    heat_numeric,
    moment_double_quadrature,
    sampled_constant,
    sampled_from_formal,
    sampled_product,
    sampled_scale,
    sampled_sum,
    sharp_integral_numeric,
    sin_im,
)
from .fock import (
    FormalOperator,
    OperatorMatrix,
    TruncatedBasis,
    adjoint,
    commutator,
    compose_formal,
    dump_operator_matrix,
    equal_on,
    identity_matrix,
    identity_operator,
    interior_block,
    load_operator_matrix,
    matrix_add,
    matrix_compose,
    matrix_scale,
    matrix_subtract,
    operator_matrix,
    project_monomial,
    spectral_norm,
    toeplitz_formal,
    toeplitz_matrix_formal,
    toeplitz_matrix_sampled,
)
from .harness import (
    EXACT_ZERO,
    ExpansionReport,
    ccr_table,
    comb_suite,
    commutator_bracket_curve,
    default_t_grid,
    default_z_grid,
    heat_expansion_curve,
    intertwining_curve,
    intertwining_valuation,
    moment_suite,
    momentum_symbol,
    parse_report,
    position_symbol,
    product_expansion_curve,
    product_suite,
    render_json,
    sharp_consistency,
    slope_fit,
)
from .symdsl import (
    NotPolynomialError,
    SymbolError,
    SymbolSyntaxError,
    lower_formal,
    lower_sampled,
    parse,
    to_text,
)

__version__ = "0.1.0"

__all__ = [
    "MultiIndex", "multi_add", "comp_min", "count_upto", "degree",
    "enumerate_upto", "factorial", "falling_factorial", "iter_box",
    "try_subtract", "unit", "validate",
    "ANTIHOLOMORPHIC", "HOLOMORPHIC", "FormalSymbol", "GaussianRational",
    "comb_closed", "comb_sum", "format_symbol", "heat_transform_formal",
    "moment_double_closed", "moment_double_series", "partial_product_expansion",
    "poisson_bracket", "random_polynomial", "sharp_formal", "star_berezin",
    "IllConditionedQuadrature", "QuadratureRule", "QuadratureSampleError",
    "SampledSymbol", "complex_exponential", "cos_re", "gauss_hermite",
    "gaussian_bump", "heat_numeric", "moment_double_quadrature",
    "sampled_constant", "sampled_from_formal", "sampled_product",
    "sampled_scale", "sampled_sum", "sharp_integral_numeric", "sin_im",
    "FormalOperator", "OperatorMatrix", "TruncatedBasis", "adjoint",
    "commutator", "compose_formal", "dump_operator_matrix", "equal_on",
    "identity_matrix", "identity_operator", "interior_block",
    "load_operator_matrix", "matrix_add", "matrix_compose", "matrix_scale",
    "matrix_subtract", "operator_matrix", "project_monomial", "spectral_norm",
    "toeplitz_formal", "toeplitz_matrix_formal", "toeplitz_matrix_sampled",
    "EXACT_ZERO", "ExpansionReport", "ccr_table", "comb_suite",
    "commutator_bracket_curve", "default_t_grid", "default_z_grid",
    "heat_expansion_curve", "intertwining_curve", "intertwining_valuation",
    "moment_suite", "momentum_symbol", "parse_report", "position_symbol",
    "product_expansion_curve", "product_suite", "render_json",
    "sharp_consistency", "slope_fit",
    "NotPolynomialError", "SymbolError", "SymbolSyntaxError",
    "lower_formal", "lower_sampled", "parse", "to_text",
]
