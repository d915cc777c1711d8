"""Shared exception types."""


class BudgetExceededError(Exception):
    """An enumeration or closure was asked to exceed its documented budget."""


class RejectionRateError(RuntimeError):
    """Rejection sampling is discarding essentially every candidate."""
