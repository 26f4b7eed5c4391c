from __future__ import annotations
from dataclasses import dataclass


@dataclass(frozen=True)
class BoundReport:
    """
    Evaluated regret bounds together with the inputs they consumed.
    `dependent_upper` is present only when delta_min is defined and positive;
    `lower` only when K >= 2U.
    """
    K: int
    U: int
    T: int
    delta_min: float | None
    delta_max: float | None
    dependent_upper: float | None
    independent_upper: float
    lower: float | None
