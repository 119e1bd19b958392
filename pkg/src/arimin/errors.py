"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-domain input (bad sizes, ragged tables, length mismatch)."""


class UndefinedIndexError(ArithmeticError):
    """An index is undefined for the given input, e.g. ARI with r = s = 1 or n < 2."""


class BudgetExceededError(RuntimeError):
    """An exhaustive search would scan more candidates than allowed."""

    def __init__(self, message: str, space_size: int, budget: int):
        super().__init__(message)
        self.space_size = space_size
        self.budget = budget


class InternalConsistencyError(RuntimeError):
    """A computed quantity violated an identity that holds for every valid input."""
