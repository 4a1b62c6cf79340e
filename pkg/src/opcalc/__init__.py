"""Operational calculus on truncated sequences.

Linear constant-coefficient differential operators (ordinary derivative or
the Bessel operator) and difference operators are turned into rational
functions of a formal shift ``s``, split into partial fractions and read
back as named functions.
"""
from .errors import (
    DenominatorVanishesAtZero,
    IncompatibleRHS,
    InvalidProblem,
    LimitDidNotConverge,
    NoFactorization,
    NotInvertible,
    OpCalcError,
    StepUnderflow,
    TruncationMismatch,
    UnnamedInverse,
)
from .rational import (
    PFDecomposition,
    PoleTerm,
    Poly,
    RationalExpr,
    factor_rates,
    find_rates,
    partial_fractions,
    pole_term_sequence,
    rational_to_sequence,
)
from .scalar import QQi
from .sequence import (
    DEFAULT_TRUNCATION,
    Sequence,
    cauchy_product,
    default_truncation,
    invert,
    shift_identity_rhs,
    shift_left,
    shift_right,
)
from .solver import (
    DifferenceProblem,
    IVProblem,
    Solution,
    VerificationReport,
    solve_difference,
    solve_ivp,
    transform_equation,
    verify_solution,
)
from .transforms import (
    NamedFunction,
    Realization,
    TableEntry,
    forward_by_operator,
    forward_from_series,
    inverse_transform,
    table,
    table_lookup,
    z_bridge,
)

__version__ = "0.1.0"

__all__ = [
    "DenominatorVanishesAtZero",
    "IncompatibleRHS",
    "InvalidProblem",
    "LimitDidNotConverge",
    "NoFactorization",
    "NotInvertible",
    "OpCalcError",
    "StepUnderflow",
    "TruncationMismatch",
    "UnnamedInverse",
    "PFDecomposition",
    "PoleTerm",
    "Poly",
    "RationalExpr",
    "factor_rates",
    "find_rates",
    "partial_fractions",
    "pole_term_sequence",
    "rational_to_sequence",
    "QQi",
    "DEFAULT_TRUNCATION",
    "Sequence",
    "cauchy_product",
    "default_truncation",
    "invert",
    "shift_identity_rhs",
    "shift_left",
    "shift_right",
    "DifferenceProblem",
    "IVProblem",
    "Solution",
    "VerificationReport",
    "solve_difference",
    "solve_ivp",
    "transform_equation",
    "verify_solution",
    "NamedFunction",
    "Realization",
    "TableEntry",
    "forward_by_operator",
    "forward_from_series",
    "inverse_transform",
    "table",
    "table_lookup",
    "z_bridge",
]
