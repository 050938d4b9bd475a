"""Shared error types."""


class ParameterError(ValueError):
    """A parameter combination violates a stated divisibility or validity
    condition."""
