"""Exception types shared across the package."""


class TracelightError(Exception):
    """Base class for all tracelight errors."""


class ParseError(TracelightError):
    """No frames could be recovered from the input text."""


class UnrecognizedFormat(ParseError):
    """The input matches neither the JVM nor the Python trace grammar."""


class InvalidK(TracelightError):
    """Suggestion count k must be >= 1."""


class UnknownGroup(TracelightError):
    """No group with the given id exists."""


class IndexOutOfRange(TracelightError):
    """A selection index falls outside the group's frame range."""


class IoFailure(TracelightError):
    """A durable write or read failed; the operation did not complete."""


class StoreUnavailable(IoFailure):
    """The backing store rejected a write."""


class CorruptSnapshot(TracelightError):
    """The snapshot file cannot be used; recovery falls back to log replay."""
