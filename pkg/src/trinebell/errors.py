"""Exception hierarchy shared across the package."""


class TrinebellError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(TrinebellError, ValueError):
    """An argument violates its contract (non-finite angle, bad setting name, ...)."""


class InvalidStateError(TrinebellError, ValueError):
    """A quantum state fails the normalization gate."""


class InvalidDistributionError(TrinebellError, ValueError):
    """A probability distribution is malformed (negative weight, bad normalization)."""


class ModelFormatError(TrinebellError, ValueError):
    """A model document failed to parse or validate.

    ``context`` names the offending field or entry when known.
    """

    def __init__(self, message: str, context: str | None = None):
        self.context = context
        if context:
            message = f"{context}: {message}"
        super().__init__(message)
