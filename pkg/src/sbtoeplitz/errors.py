"""Exception types shared across the package."""


class SBTError(Exception):
    """Base class for all package errors."""


class SymbolParseError(SBTError, ValueError):
    """Symbol text does not match the grammar."""

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class ConstraintError(SBTError, ValueError):
    """A parameter is outside its admissible range."""


class RangeError(SBTError, ValueError):
    pass


class InsufficientDataError(SBTError, ValueError):
    pass


class DivergenceError(SBTError, ArithmeticError):
    """An integral is not absolutely convergent under the declared decay budget."""


class AccuracyError(SBTError, ArithmeticError):
    """Quadrature failed to reach the requested tolerance.

    ``estimates`` holds the last two values produced before giving up.
    """

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class SingularityError(SBTError, ZeroDivisionError):
    pass
