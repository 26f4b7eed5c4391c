from .instance_repository import InstanceRepository
from .result_repository import ResultRepository
from .trace_repository import TraceRepository

__all__ = [
    "InstanceRepository",
    "ResultRepository",
    "TraceRepository",
]
