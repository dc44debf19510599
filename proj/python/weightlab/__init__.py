from ._core import (
    Analysis,
    EvaluationError,
    ParseError,
    PowerSeries,
    analyze,
    cli,
    doubling,
    monomials,
    operator_norm,
    parse_expr,
    random_polynomials,
    validate,
    weight_value,
)

__all__ = [
    "Analysis",
    "EvaluationError",
    "ParseError",
    "PowerSeries",
    "analyze",
    "cli",
    "doubling",
    "monomials",
    "operator_norm",
    "parse_expr",
    "random_polynomials",
    "validate",
    "weight_value",
]
