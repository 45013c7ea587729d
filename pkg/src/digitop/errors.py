"""Shared exception types."""


class DigitopError(Exception):
    """Base class for errors raised by this package."""


class InputError(DigitopError):
    """A file or inline specification failed to parse or validate."""


class BudgetExceededError(DigitopError):
    """An enumeration would exceed the configured candidate budget."""


class UnknownClaimError(DigitopError):
    """A claim id was requested that is not in the registry."""
