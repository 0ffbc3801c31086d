"""Dehn-filling polynomials: exact arithmetic, factorization, and root surveys.

The package builds one-variable filling polynomials from two-variable
Laurent polynomial input, factors them exactly over the integers, splits
cyclotomic from non-cyclotomic factors, computes Mahler measures with
certified error, and runs coprime-pair sweeps that measure degree bands
and root-moduli bounds empirically.
"""

from .bivar import (
    BivarLaurentPoly,
    NewtonPolygon,
    ValidationReport,
    edge_polynomial,
    monomial_substitute,
    newton_polygon,
    normalize,
    parse,
    validate_apoly,
)
from .errors import (
    DegreeBoundExceededError,
    DehnfillError,
    InsufficientDataError,
    InternalCheckFailedError,
    LeadingTieError,
    NonConvergenceError,
    NonUnimodularMatrixError,
    ParseError,
    ZeroPolynomialError,
)
from .fill import (
    FillingPoly,
    FillingSlope,
    classify_slope,
    collision_slopes,
    predict_leading,
    sector_transform,
    specialize,
)
from .intpoly import UniIntPoly, poly_gcd
from .measure import (
    MahlerEstimate,
    RootSet,
    find_roots,
    lehmer_check,
    mahler,
    mahler_graeffe,
    poly_length,
)
from .rootmodel import (
    ModelSolveReport,
    RootGeometryReport,
    near_unit_threshold_stats,
    product_bound_check,
    root_geometry,
    solve_model,
)
from .lab import (
    DegreeBand,
    SurveyRecord,
    SweepPlan,
    degree_band,
    emit_plotdata,
    fit_modulus_bound,
    run_survey,
    sector_survey,
    write_outputs,
)
from .zfactor import (
    Factorization,
    cyclotomic_order,
    cyclotomic_poly,
    cyclotomic_split,
    factor,
    factor_split,
    is_cyclotomic_product,
    squarefree_decompose,
    squarefree_part,
)

__version__ = "0.1.0"

__all__ = [
    "BivarLaurentPoly",
    "NewtonPolygon",
    "ValidationReport",
    "parse",
    "normalize",
    "newton_polygon",
    "edge_polynomial",
    "validate_apoly",
    "monomial_substitute",
    "FillingSlope",
    "FillingPoly",
    "specialize",
    "predict_leading",
    "collision_slopes",
    "sector_transform",
    "classify_slope",
    "UniIntPoly",
    "poly_gcd",
    "Factorization",
    "factor",
    "factor_split",
    "cyclotomic_split",
    "cyclotomic_order",
    "cyclotomic_poly",
    "is_cyclotomic_product",
    "squarefree_decompose",
    "squarefree_part",
    "RootSet",
    "MahlerEstimate",
    "find_roots",
    "mahler",
    "mahler_graeffe",
    "poly_length",
    "lehmer_check",
    "RootGeometryReport",
    "ModelSolveReport",
    "root_geometry",
    "solve_model",
    "product_bound_check",
    "near_unit_threshold_stats",
    "DehnfillError",
    "ZeroPolynomialError",
    "ParseError",
    "NonUnimodularMatrixError",
    "LeadingTieError",
    "DegreeBoundExceededError",
    "InternalCheckFailedError",
    "NonConvergenceError",
    "InsufficientDataError",
    "SweepPlan",
    "SurveyRecord",
    "DegreeBand",
    "run_survey",
    "sector_survey",
    "degree_band",
    "fit_modulus_bound",
    "emit_plotdata",
    "write_outputs",
]
