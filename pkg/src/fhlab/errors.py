"""Exception types shared across the package."""


class FhlabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FhlabError):
    """Parameter outside its mathematical domain (usage error)."""


class HypothesisError(DomainError):
    """A stated hypothesis of a threshold formula is violated."""


class SchemaError(FhlabError):
    """Run configuration failed validation."""


class EmptyRegion(FhlabError):
    """The admissible region has no interior for these parameters."""


class PositivityViolation(FhlabError):
    """A step exponent came out nonpositive where positivity is guaranteed."""


class EquivalenceFailure(FhlabError):
    """Region membership and the admissibility conditions disagreed."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class InfeasibleChain(FhlabError):
    """The Holder/HLS exponent chain left [0, 1] or lost its margin."""


class NumericalError(FhlabError):
    """Base for runtime numerical failures."""


class NonFinite(NumericalError):
    """A field value overflowed or became NaN during evolution."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ResolutionError(NumericalError):
    """Grid cannot resolve the requested data or decomposition."""


class BudgetExceeded(NumericalError):
    """A step-size or norm budget of the iteration was violated."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class NoContraction(NumericalError):
    """Picard iteration failed to contract within the iteration cap."""
