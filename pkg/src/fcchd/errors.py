class ParameterError(ValueError):
    """A precondition on the inputs of an operation does not hold."""


class BudgetExceeded(RuntimeError):
    """An enumeration or search exceeded its configured budget."""

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget
