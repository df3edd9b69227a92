"""Exception types raised across the package."""


class CfractError(Exception):
    """Base class for every error raised by cfract."""


class PerfectSquare(CfractError, ValueError):
    def __init__(self, n):
        super().__init__(f"{n} is a perfect square")
        self.n = n


class PeriodNotFound(CfractError):
    """The expansion hit ``max_terms`` before the period closed."""

    def __init__(self, n, max_terms):
        super().__init__(f"period of sqrt({n}) not closed within {max_terms} terms")
        self.n = n
        self.max_terms = max_terms


class InternalInconsistency(CfractError, AssertionError):
    pass


class EvenPeriod(CfractError, ValueError):
    pass


class OddPeriod(CfractError, ValueError):
    pass


class NoEvenPeriod(OddPeriod):
    pass


class NotReduced(CfractError, ValueError):
    pass


class IncompatibleForms(CfractError, ValueError):
    pass


class PrecisionExhausted(CfractError):
    """Accumulated rounding error is too large for the requested resolution."""


class DomainError(CfractError, ValueError):
    pass


class Exhausted(CfractError):
    """Every probe ran without producing a divisor."""


class Incomplete(CfractError):
    def __init__(self, partial, message="composite cofactor left unsplit"):
        super().__init__(message)
        self.partial = partial
