"""Shared exception hierarchy for the abi package."""


class AbiError(Exception):
    """Base class for every error raised by this package."""


class InvalidValue(AbiError, ValueError):
    """A domain value violates one of its construction invariants."""
