from __future__ import annotations
from typing import TYPE_CHECKING

import numpy as np

from .gaps import check_users, gap_summary

if TYPE_CHECKING:
    from models.instances import EgalMabInstance


def oracle_select(instance: EgalMabInstance, U: int) -> tuple[int, ...]:
    """The optimal arm set (true means known), ascending."""
    return gap_summary(instance, U).top_set


def random_select(K: int, U: int, rng: np.random.Generator) -> tuple[int, ...]:
    """A uniformly random U-subset of [K], ascending; consumes `rng`."""
    check_users(K, U)
    chosen = rng.choice(K, size=U, replace=False)
    return tuple(int(a) + 1 for a in np.sort(chosen))
