"""Exceptions raised by the queues, the oracle and the trace tools."""


class QueueError(Exception):
    """Base class for every error raised by this package."""


class EmptyQueueError(QueueError, LookupError):
    """find_min / delete_min on a queue with no live elements."""


class StaleHandleError(QueueError, KeyError):
    """The handle's element has already been removed."""


class WrongQueueError(QueueError, ValueError):
    """The handle was issued by a different queue."""


class ContractError(QueueError, AssertionError):
    """A structural primitive was called outside its precondition."""


class ConfigurationError(QueueError, ValueError):
    pass


class TraceError(QueueError, ValueError):
    """Malformed trace or access-sequence input.

    ``lineno`` is 1-based, or None when the error is not tied to a line.
    """

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno
