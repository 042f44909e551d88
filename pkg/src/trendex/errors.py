"""Shared exception types."""


class TrendexError(Exception):
    """Base class for errors raised by this package."""


class LoadError(TrendexError):
    """A data file is missing or malformed; the message names file and line."""
