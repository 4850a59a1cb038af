"""Exception types shared across the package."""


class CausalTreeError(Exception):
    """Base class for all package errors."""


class ValidationError(CausalTreeError, ValueError):
    """Input data violates a structural requirement."""


class NumericalError(CausalTreeError, ArithmeticError):
    """A numerical computation could not be carried out safely."""


class NotSymmetric(ValidationError):
    pass


class IndexOutOfRange(ValidationError, IndexError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class NumericalInconsistency(NumericalError):
    """An information quantity came out negative beyond rounding error."""


class NotStrictlyCausal(ValidationError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class TooLarge(ValidationError):
    pass


class KindMismatch(ValidationError):
    pass
