"""Exception types shared across the package."""


class BudgetExceededError(Exception):
    """An enumeration would exceed the configured product budget."""


class ModelMismatchError(Exception):
    """An isometry set and a point/operation belong to different models."""
