"""Solver for quadratic programs with linear complementarity constraints.

Complementarity is enforced by construction: each pair lives on the
relaxed curve s*t = kappa through a softplus retraction, an augmented
Lagrangian handles the remaining affine coupling, and an outer
continuation drives the relaxation to zero.
"""

from .errors import (
    DimensionMismatch,
    LcqpError,
    NonFiniteEntry,
    NonSymmetricQ,
    OracleTooLarge,
    SchemaError,
    WrongInertia,
    ZeroPivotError,
)
from .oracle import OracleResult, PieceAssignment, global_solve, solve_qp_active_set
from .problem import (
    LcqpProblem,
    ViolationReport,
    build_problem,
    objective,
    validate,
    violations,
)
from .retraction import (
    group_compose,
    retract_pair,
    softplus,
    softplus_deriv,
    softplus_second_deriv,
)
from .solver import (
    SolveResult,
    SolverSettings,
    SolveStatus,
    initialize,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "LcqpError", "DimensionMismatch", "NonSymmetricQ", "NonFiniteEntry",
    "SchemaError", "ZeroPivotError", "WrongInertia", "OracleTooLarge",
    "LcqpProblem", "ViolationReport", "build_problem", "validate",
    "objective", "violations",
    "softplus", "softplus_deriv", "softplus_second_deriv",
    "retract_pair", "group_compose",
    "SolverSettings", "SolveStatus", "SolveResult", "initialize", "solve",
    "PieceAssignment", "OracleResult", "global_solve", "solve_qp_active_set",
    "__version__",
]
