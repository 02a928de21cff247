"""Exception hierarchy.

Everything raised on bad input derives from :class:`ValidationError`, so the
CLI can map the whole family to one exit code.
"""


class SnakeTreeError(Exception):
    """Base class for all library errors."""


class ValidationError(SnakeTreeError, ValueError):
    """Input data violates a documented precondition."""


class FieldMismatch(ValidationError):
    pass


class InvalidField(ValidationError):
    pass


class NotRational(ValidationError):
    pass


class ZeroSeries(ValidationError):
    pass


class EqualSeries(ValidationError):
    pass


class IncompatiblePoint(ValidationError):
    pass


class NonRealProduct(ValidationError):
    pass


class UnitVanishes(ValidationError):
    pass


class DuplicateRoot(ValidationError):
    pass


class NotRightReduced(DuplicateRoot):
    """Two real roots coincide."""


class NonPositiveValuation(ValidationError):
    pass


class ConjugationClosureViolated(ValidationError):
    pass


class FieldRequired(ValidationError):
    pass


class InputSyntaxError(ValidationError):
    """Malformed problem file; carries a 1-based position."""

    def __init__(self, line, column, expected, text=""):
        self.line = line
        self.column = column
        self.expected = expected
        msg = f"line {line}, column {column}: expected {expected}"
        if text:
            msg += f" (got {text!r})"
        super().__init__(msg)


class EqualCriticalValueSeries(SnakeTreeError):
    pass


class EqualDiscriminantRoots(SnakeTreeError):
    pass


class InjectivityRequired(SnakeTreeError):
    pass


class IndeterminateSign(SnakeTreeError):
    pass


class NoStabilization(SnakeTreeError):
    pass


class InconsistencyError(SnakeTreeError):
    """Two independent computations of the same quantity disagree."""
