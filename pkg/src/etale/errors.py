"""Exception types shared across the package."""


class EtaleError(Exception):
    """Base class for all package errors."""


class DivisionByZero(EtaleError, ZeroDivisionError):
    pass


class RepresentationError(EtaleError, ValueError):
    """A value cannot be expressed in the cyclotomic representation."""


class PrecisionExhausted(EtaleError, ArithmeticError):
    """Interval refinement hit the precision cap without deciding a comparison."""


class NotRootOfUnity(EtaleError, ValueError):
    pass


class SearchBudgetExceeded(EtaleError, RuntimeError):
    """A bounded search ran out of nodes.

    ``partial`` carries whatever results were found before the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = list(partial or [])


class InconsistentBranching(EtaleError, RuntimeError):
    pass
