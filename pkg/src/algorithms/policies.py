from __future__ import annotations
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING
try:
    from typing import override
except ImportError:  # Python < 3.12
    from typing_extensions import override

import numpy as np

from models.policies import PolicyKind
from .baselines import oracle_select, random_select
from .egalucb import egalucb_finalize_block, egalucb_init, egalucb_observe_block, egalucb_select

if TYPE_CHECKING:
    from models.instances import EgalMabInstance


class BasePolicy(ABC):
    """Contract for every arm-set policy driven by the simulator."""

    kind: PolicyKind

    def __init__(self, instance: EgalMabInstance, U: int):
        self.state = egalucb_init(instance.K, U)

    @abstractmethod
    def select_arms(self) -> tuple[int, ...]: ...

    def observe_block(self, block: np.ndarray, rewards: np.ndarray) -> None:
        """Records a block's rewards and closes it."""
        egalucb_observe_block(self.state, block, rewards)
        egalucb_finalize_block(self.state)


class EgalUcbPolicy(BasePolicy):
    kind = PolicyKind.EGALUCB

    @override
    def select_arms(self) -> tuple[int, ...]:
        return egalucb_select(self.state)


class OracleRoundRobinPolicy(BasePolicy):
    """Plays the optimal set in every block."""

    kind = PolicyKind.ORACLE

    def __init__(self, instance: EgalMabInstance, U: int):
        super().__init__(instance, U)
        self._arms = oracle_select(instance, U)

    @override
    def select_arms(self) -> tuple[int, ...]:
        return self._arms


class RandomAssignmentPolicy(BasePolicy):
    """A uniformly random set per block, drawn from the episode stream."""

    kind = PolicyKind.RANDOM

    def __init__(self, instance: EgalMabInstance, U: int, rng: np.random.Generator):
        super().__init__(instance, U)
        self._rng = rng

    @override
    def select_arms(self) -> tuple[int, ...]:
        return random_select(self.state.K, self.state.U, self._rng)


def make_policy(kind: PolicyKind, instance: EgalMabInstance, U: int, rng: np.random.Generator) -> BasePolicy:
    if kind is PolicyKind.EGALUCB:
        return EgalUcbPolicy(instance, U)
    if kind is PolicyKind.ORACLE:
        return OracleRoundRobinPolicy(instance, U)
    return RandomAssignmentPolicy(instance, U, rng)
