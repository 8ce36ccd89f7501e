"""Exception types raised across the toolkit.

Every error derives from :class:`BizCycleError` and from :class:`ValueError`,
so callers that only care about "bad input" can catch ``ValueError``.
"""


class BizCycleError(ValueError):
    """Base class for all validation errors raised by bizcycles."""


class ParseError(BizCycleError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class SpacingError(BizCycleError):
    """Sample times are not uniformly spaced."""


class SizeError(BizCycleError):
    """A series or window is too short (or lengths disagree)."""


class DomainError(BizCycleError):
    """A numeric argument lies outside the domain of the operation."""


class NyquistError(BizCycleError):
    """A requested frequency cannot be represented at the given sampling step."""


class ConfigError(BizCycleError):
    """Inconsistent user configuration (e.g. overlapping bands)."""


class RangeError(BizCycleError):
    """A requested time window lies outside the series span."""
