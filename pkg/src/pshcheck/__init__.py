"""Numerical checks for plurisubharmonicity via ellipsoid mean values.

Core pieces: an expression compiler for candidate functions (vm), Monte
Carlo means over complex ellipsoids (integrate), generalized Laplacian
and ellipsoid-mean operators with limsup schedules (operators), grid
checks that turn estimates into consistent/violation/inconclusive
verdicts (criteria), an independent finite-difference Levi-form oracle
(oracle), and a catalog of functions with known classification.
"""

__version__ = "0.1.0"

from .catalog import CatalogEntry, catalog, lookup
from .criteria import (
    Verdict,
    Witness,
    check_bp_psh,
    check_harmonic_p,
    check_mean_value_b,
    check_mean_value_d,
    check_subharmonic_p,
    lattice_ellipsoids,
    monotonicity_scan,
)
from .errors import (
    ConfigError,
    DimensionMismatchError,
    DomainError,
    EvaluationError,
    ExprTypeError,
    OracleUnavailableError,
    ParseError,
    PointAtMinusInfinityError,
    PshcheckError,
)
from .geometry import Ellipsoid, UnitaryFrame, ellipsoid_volume, sample_haar_unitary
from .integrate import ball_mean, mean_over_ellipsoid, sphere_mean, weighted_radial_mean
from .mc import MeanEstimate, default_budget, mc_mean
from .operators import (
    LimsupSchedule,
    OperatorEstimate,
    bp_laplacian,
    candidate_frames,
    d_upper,
    d_upper_T,
    p_laplacian,
)
from .oracle import (
    LeviForm,
    fd_laplacian,
    levi_form,
    line_subharmonic_check,
    min_levi_eigenvalue,
)
from .vm import CompiledExpr, available_backends, compile_expression, default_backend
from .weights import WeightFunction, ball_weight, ellipsoid_slice_weight, laplace_constant

__all__ = [
    "__version__",
    "CatalogEntry",
    "CompiledExpr",
    "ConfigError",
    "DimensionMismatchError",
    "DomainError",
    "Ellipsoid",
    "EvaluationError",
    "ExprTypeError",
    "LeviForm",
    "LimsupSchedule",
    "MeanEstimate",
    "OperatorEstimate",
    "OracleUnavailableError",
    "ParseError",
    "PointAtMinusInfinityError",
    "PshcheckError",
    "UnitaryFrame",
    "Verdict",
    "WeightFunction",
    "Witness",
    "available_backends",
    "ball_mean",
    "ball_weight",
    "bp_laplacian",
    "candidate_frames",
    "catalog",
    "check_bp_psh",
    "check_harmonic_p",
    "check_mean_value_b",
    "check_mean_value_d",
    "check_subharmonic_p",
    "compile_expression",
    "d_upper",
    "d_upper_T",
    "default_backend",
    "default_budget",
    "ellipsoid_slice_weight",
    "ellipsoid_volume",
    "fd_laplacian",
    "laplace_constant",
    "lattice_ellipsoids",
    "levi_form",
    "line_subharmonic_check",
    "lookup",
    "mc_mean",
    "mean_over_ellipsoid",
    "min_levi_eigenvalue",
    "monotonicity_scan",
    "p_laplacian",
    "sample_haar_unitary",
    "sphere_mean",
    "weighted_radial_mean",
]
