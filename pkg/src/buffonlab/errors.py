"""Exception types shared across the package.

The CLI maps ConfigurationError to exit code 1 and InsufficientDataError
(and subclasses) to exit code 2.
"""


class ConfigurationError(ValueError):
    """An experiment was configured outside its domain of validity."""


class InsufficientDataError(RuntimeError):
    """An estimate was requested from data that cannot support it."""


class NoCrossingsError(InsufficientDataError):
    """The needle never crossed a line, so 2ln/(am) is undefined."""


class NoIntersectionsError(InsufficientDataError):
    """The two segment sets never intersected, so 2SL/(pi N) is undefined."""
