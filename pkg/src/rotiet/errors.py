"""Exception hierarchy shared by every module of the package."""


class IREError(ValueError):
    """Base class for all domain errors raised by rotiet."""


class NotTwoRow(IREError):
    pass


class KeyMismatch(IREError):
    pass


class NotAllowed(IREError):
    pass


class Inconsistent(IREError):
    pass


class NotPositive(IREError):
    pass


class Necessity(IREError):
    """Raised when two lengths are forced equal by the cycle relations."""


class NotApplicable(IREError):
    pass


class NonPositiveResult(IREError):
    pass


class NotMergeable(IREError):
    pass


class BadSplit(IREError):
    pass


class ReplayMismatch(IREError):
    def __init__(self, index, message):
        super().__init__(f"op #{index}: {message}")
        self.index = index


class NotRotational(IREError):
    pass


class NotIrreducible(IREError):
    pass


class StepBudgetExceeded(IREError):
    pass


class Cancelled(IREError):
    pass


class OutOfDomain(IREError):
    pass


class Degenerate(IREError):
    pass


class TypeMismatch(IREError):
    pass


class RealizationRetryExhausted(IREError):
    pass


class PerturbationTooLarge(IREError):
    pass


class ParseError(IREError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class ValidationError(IREError):
    pass
