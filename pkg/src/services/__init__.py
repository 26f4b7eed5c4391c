from .bound_service import BoundService
from .experiment_service import ExperimentService
from .ingest_service import IngestService
from .instance_service import InstanceService
from .simulation_service import SimulationService

__all__ = [
    "BoundService",
    "ExperimentService",
    "IngestService",
    "InstanceService",
    "SimulationService",
]
