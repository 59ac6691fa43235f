"""Exception types shared across the package."""


class AffbolError(Exception):
    """Base class for every error raised by this package."""


class NotPrimePower(AffbolError, ValueError):
    pass


class DivisionByZero(AffbolError, ZeroDivisionError):
    pass


class DimensionMismatch(AffbolError, ValueError):
    pass


class ContextMismatch(AffbolError, ValueError):
    pass


class BudgetExceeded(AffbolError):
    """An enumeration would exceed the configured size cap."""


class BudgetExhausted(AffbolError):
    """A search ran out of its node budget before finishing.

    The partial result is attached so callers can still report the best
    family found so far.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NotVerified(AffbolError):
    pass


class QEqualsTwo(AffbolError, ValueError):
    """No prime divides q - 1 when q = 2."""


class InvalidP(AffbolError, ValueError):
    pass


class InternalInconsistency(AffbolError, AssertionError):
    """A proved theorem appears violated; always an implementation bug."""


class ParseError(AffbolError, ValueError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class VersionMismatch(ParseError):
    pass
