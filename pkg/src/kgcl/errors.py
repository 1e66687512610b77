"""Shared exception base for the package."""


class KgclError(Exception):
    """Base class for all errors raised by this package."""
