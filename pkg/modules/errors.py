"""Exception hierarchy; every class carries the CLI exit code it maps to."""

from typing import Optional


class TwoPointError(Exception):
    exit_code = 1


class UsageError(TwoPointError):
    exit_code = 1


class ExpressionSyntaxError(TwoPointError):
    """Raised by the parser; `position` is a 0-based offset into the text."""
    exit_code = 1

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class NonIntegerExponentError(ExpressionSyntaxError):
    pass


class MathDomainError(TwoPointError):
    exit_code = 2


class PoleEvaluationError(MathDomainError):
    pass


class EssentialSingularityError(MathDomainError):
    pass


class ZeroDivisorError(MathDomainError):
    pass


class CoincidentPointsError(MathDomainError):
    pass


class PoleAtExpansionPointError(MathDomainError):
    pass


class EmptyRegionError(MathDomainError):
    pass


class PoleSpecError(MathDomainError):
    pass


class NonPolynomialDenominatorError(MathDomainError):
    pass


class RootFindingError(MathDomainError):
    pass


class NoValidContourError(MathDomainError):
    pass


class QuadratureError(MathDomainError):
    pass


class VerificationError(TwoPointError):
    exit_code = 3


class OracleMismatchError(VerificationError):
    pass
