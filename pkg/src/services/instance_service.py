from __future__ import annotations
import logging
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from algorithms.bounds import hard_instance
from algorithms.gaps import check_users
from errors import DomainError
from models.generators import GeneratorSpec, MeansSource
from models.instances import EgalMabInstance

if TYPE_CHECKING:
    from repositories.instance_repository import InstanceRepository

logger = logging.getLogger(__name__)


def generate_means(spec: GeneratorSpec, K: int, U: int, seed: int) -> np.ndarray:
    """
    Arm means for a synthetic instance.

    Args:
        spec (GeneratorSpec): The recipe; HARD is not handled here.
        K (int): Number of arms.
        U (int): Number of users (used by top-u-means).
        seed (int): Fallback seed for uniform means.

    Returns:
        np.ndarray: K means.
    """
    match spec.source:
        case MeansSource.UNIFORM:
            lo, hi = spec.params
            rng = np.random.default_rng(seed if spec.means_seed is None else spec.means_seed)
            return rng.uniform(lo, hi, size=K)
        case MeansSource.TOP_U:
            check_users(K, U)
            high, low = spec.params
            return np.where(np.arange(1, K + 1) <= U, high, low)
        case MeansSource.LIST:
            if len(spec.params) != K:
                raise DomainError(f"means lists {len(spec.params)} values but K={K}.")
            return np.array(spec.params, dtype=np.float64)
    raise DomainError(f"No means for source '{spec.source.value}'.")


class InstanceService:
    """
    Builds, loads and saves EgalMAB instances.
    """

    def __init__(self, instance_repo: InstanceRepository):
        """
        Initializes the InstanceService.

        Args:
            instance_repo (InstanceRepository): Instance file persistence.
        """
        self.instance_repo = instance_repo

    def generate(self, spec: GeneratorSpec, K: int, U: int, T: int, seed: int) -> EgalMabInstance:
        """Builds the synthetic instance described by `spec` for (K, U, T)."""
        if K < 1:
            raise DomainError(f"K must be >= 1, got {K}.")
        if spec.source is MeansSource.HARD:
            instance, delta = hard_instance(K, U, T)
            logger.info("[InstanceService] Hard instance K=%d U=%d T=%d, delta=%.6g", K, U, T, delta)
            return instance
        means = generate_means(spec, K, U, seed)
        if spec.family == "bernoulli":
            return EgalMabInstance.bernoulli(means)
        return EgalMabInstance.gaussian(means, spec.std)

    def load(self, path: str | Path) -> EgalMabInstance:
        instance = self.instance_repo.read(path)
        logger.info("[InstanceService] Loaded %d %s arms from %s", instance.K, instance.family, path)
        return instance

    def save(self, path: str | Path, instance: EgalMabInstance) -> Path:
        return self.instance_repo.write(path, instance)
