from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class PolicyKind(Enum):
    EGALUCB = "egalucb"
    ORACLE = "oracle"
    RANDOM = "random"

    @classmethod
    def from_label(cls, label: str | PolicyKind) -> PolicyKind:
        if isinstance(label, cls):
            return label
        try:
            return cls(str(label).strip().lower())
        except ValueError:
            choices = ", ".join(kind.value for kind in cls)
            raise ValueError(f"Unknown policy '{label}'. Choose one of: {choices}.") from None


@dataclass
class EgalUcbState:
    """
    Mutable statistics of one EgalUCB episode.

    Arrays are indexed by arm 0..K-1; `rr_index` holds the 1-based position
    vector used to rotate the block's arm set among users. `block_arms` and
    `steps_observed` track the block in progress and are cleared by
    `egalucb_finalize_block`.
    """
    K: int
    U: int
    block: int = 0
    blocks_played: np.ndarray = field(default=None)
    cum_reward: np.ndarray = field(default=None)
    ucb: np.ndarray = field(default=None)
    rr_index: tuple[int, ...] = ()
    block_arms: set[int] = field(default_factory=set)
    steps_observed: int = 0

    def __post_init__(self):
        if self.blocks_played is None:
            self.blocks_played = np.zeros(self.K, dtype=np.int64)
        if self.cum_reward is None:
            self.cum_reward = np.zeros(self.K, dtype=np.float64)
        if self.ucb is None:
            self.ucb = np.full(self.K, np.inf, dtype=np.float64)
        if not self.rr_index:
            self.rr_index = tuple(range(1, self.U + 1))
