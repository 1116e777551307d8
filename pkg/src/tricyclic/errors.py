"""Exception types shared across the package."""


class TricyclicError(Exception):
    """Base class for all package errors."""


class ConfigurationError(TricyclicError):
    """Unsupported parameters: bad (p, m), missing modulus, invalid CLI input."""


class IntegrityError(TricyclicError):
    """Embedded or user-supplied data failed a self-check (bad modulus table)."""


class InternalInconsistencyError(TricyclicError):
    """Two exact computations that must agree did not. Always a bug."""


class BudgetExceededError(TricyclicError):
    """An enumeration would exceed the configured evaluation budget."""

    def __init__(self, required: int, budget: int, what: str = "enumeration"):
        self.required = required
        self.budget = budget
        super().__init__(
            f"{what} needs {required} evaluations, over the budget of {budget}; "
            f"raise --budget to allow it"
        )


class InvalidDistributionError(TricyclicError):
    """A weight distribution is not that of a linear code (transform failed)."""


class IdentitySystemError(TricyclicError):
    """The two frequency-solver paths disagree, or a solution is inadmissible."""

    def __init__(self, message: str, closed=None, solved=None):
        self.closed = closed
        self.solved = solved
        super().__init__(message)
