class Inapplicable(ValueError):
    """A construction's preconditions do not hold for the given input."""


class BudgetExceeded(RuntimeError):
    """A bounded search ran out of budget.

    ``partial`` carries whatever was found before the cut-off; those
    results are not confirmed to be complete.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SoundnessError(AssertionError):
    """Two independent routes disagreed; this is a bug, never a valid result."""
