"""Exception types shared across the package."""


class HlawkaError(Exception):
    """Base class for all errors raised by this package."""


class InputError(HlawkaError, ValueError):
    """Malformed or out-of-contract input (bad dimensions, non-finite
    entries, invalid parameters, unparseable files)."""


class BudgetError(HlawkaError):
    """A guard refused an operation that would exceed a resource budget
    (tensor dimension, group order, permanent size).  Budgets fail fast;
    nothing is silently truncated."""
