"""Exception types shared across the package."""


class CachingError(Exception):
    """Base class for all errors raised by spc_caching."""


class InvalidParamsError(CachingError, ValueError):
    """A parameter lies outside the domain of the construction."""


class InvalidPicksError(InvalidParamsError):
    """Block picks for an intersection query are malformed."""


class InconsistentInputError(CachingError, ValueError):
    """Inputs that must agree with each other (scheme, design, corpus, demands) do not."""


class SchemeFileError(CachingError):
    """A scheme file could not be parsed or does not describe a valid scheme."""


class SweepTooLargeError(InvalidParamsError):
    """An exhaustive demand sweep would exceed the configured run limit."""
