"""Distribution-sensitive priority queues built from (2,3) binomial trees."""

from .depq import DoubleEndedQueue
from .errors import (
    ConfigurationError,
    ContractError,
    EmptyQueueError,
    QueueError,
    StaleHandleError,
    TraceError,
    WrongQueueError,
)
from .meter import CostMeter
from .tf_queue import TimeFingerQueue
from .ws_queue import Handle, WorkingSetQueue

__all__ = [
    "ConfigurationError",
    "ContractError",
    "CostMeter",
    "DoubleEndedQueue",
    "EmptyQueueError",
    "Handle",
    "QueueError",
    "StaleHandleError",
    "TimeFingerQueue",
    "TraceError",
    "WorkingSetQueue",
    "WrongQueueError",
]
