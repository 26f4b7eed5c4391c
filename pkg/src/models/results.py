from __future__ import annotations
from dataclasses import dataclass

import numpy as np

from .policies import PolicyKind


@dataclass
class RunResult:
    """
    One seeded episode, recorded at block boundaries t = U, 2U, ..., T.

    Array rows are blocks; `arm_sets` holds each block's arm set in ascending
    1-based order and `user_rewards` the realized cumulative reward of every
    user. `arm_plays` counts total plays T_{a,T} per arm (0-based).
    """
    seed: int
    T: int
    U: int
    policy: PolicyKind
    arm_sets: np.ndarray
    user_rewards: np.ndarray
    pseudo_regret: np.ndarray
    min_user_reward: np.ndarray
    arm_plays: np.ndarray

    @property
    def n_blocks(self) -> int:
        return self.T // self.U

    @property
    def times(self) -> np.ndarray:
        return np.arange(1, self.n_blocks + 1, dtype=np.int64) * self.U


@dataclass
class AggregateResult:
    """Pointwise statistics of pseudo-regret over replicated episodes."""
    policy: PolicyKind
    T: int
    U: int
    seeds: tuple[int, ...]
    times: np.ndarray
    mean_regret: np.ndarray
    min_regret: np.ndarray
    max_regret: np.ndarray
    mean_min_user_reward: np.ndarray
    mean_curve_regret: np.ndarray

    @property
    def n_runs(self) -> int:
        return len(self.seeds)


@dataclass(frozen=True)
class SweepRow:
    """Final-time aggregate for one number of users in a sweep."""
    policy: PolicyKind
    U: int
    T: int
    mean_regret: float
    min_regret: float
    max_regret: float
    n_runs: int
