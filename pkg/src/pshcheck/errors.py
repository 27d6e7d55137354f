"""Exception types shared across the package."""


class PshcheckError(Exception):
    """Base class for all package errors."""


class DomainError(PshcheckError, ValueError):
    """An argument violates a documented precondition."""


class DimensionMismatchError(DomainError):
    """Operands have incompatible dimensions."""


class EvaluationError(PshcheckError, ArithmeticError):
    """Evaluation produced NaN, +inf, divided by zero, or took log of a
    negative number.  Distinguishes genuine bugs from legitimate -inf values."""


class PointAtMinusInfinityError(DomainError):
    """A pointwise operator was asked for at a point where u = -inf."""


class OracleUnavailableError(PshcheckError):
    """A finite-difference stencil hit -inf; the smooth oracle does not apply."""


class ParseError(PshcheckError, ValueError):
    """Syntax error in an expression, with byte offset and expected tokens."""

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f" at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(message + detail)


class ExprTypeError(PshcheckError, ValueError):
    """Expression is not real-valued at the root, mixes z- and x-variables,
    or applies log/max/min to a complex-valued subtree."""


class ConfigError(PshcheckError, ValueError):
    """A run configuration is invalid (bad grid, unknown check, unfit radii)."""
