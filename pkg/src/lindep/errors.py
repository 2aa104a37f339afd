"""Exception hierarchy shared by all modules."""


class LindepError(Exception):
    """Base class for every error raised by this package."""


class NonPositiveInput(LindepError, ValueError):
    pass


class OutOfRange(LindepError, ValueError):
    pass


class PoleAtInteger(LindepError, ValueError):
    pass


class NotCoprime(LindepError, ValueError):
    pass


class NotDirichletType(LindepError, ValueError):
    pass


class TooLarge(LindepError, ValueError):
    pass


class InvalidIndex(LindepError, ValueError):
    pass


class InvariantViolation(LindepError, AssertionError):
    """An internal consistency check failed: this is a bug, not a math result."""


class NonCoprimeModuli(LindepError, ValueError):
    pass


class PrecisionExhausted(LindepError):
    """The requested quantity cannot be decided at the current precision."""


class NonzeroPeriodSum(LindepError, ValueError):
    pass


class NotOddCharacter(LindepError, ValueError):
    pass


class UnitSumVanishes(LindepError):
    pass


class PrecisionTooLow(LindepError):
    pass


class ValuesTooUncertain(LindepError):
    pass


class HypothesisFailed(LindepError):
    def __init__(self, message, hypothesis=None, report=None):
        super().__init__(message)
        self.hypothesis = hypothesis or {}
        self.report = report  # partial report when some legs still ran


class CorruptEntry(LindepError):
    pass
