"""Shared exception types."""


class InputError(ValueError):
    """Raised for malformed user input: lattice expressions, configuration
    files, or inconsistent numeric data."""


class CapExceeded(RuntimeError):
    """Raised when an exact enumeration would exceed its safety cap.

    The caps guard against silently running forever on oversized groups or
    graphs; callers that can degrade gracefully should catch this and report
    the failure, everything else lets it propagate.
    """
