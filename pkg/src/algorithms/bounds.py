from __future__ import annotations
import math
from typing import Sequence

from errors import DomainError
from models.arms import GaussianArm
from models.instances import EgalMabInstance

"""
Closed-form regret bounds and the lower-bound instance pair.
All logarithms are natural. Every function here is pure.
"""

DEPENDENT_CONSTANT = 2136.0
INDEPENDENT_CONSTANT = 8544.0
LOWER_CONSTANT = 76.0


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def confidence_radius(b: int, b_prime: int, U: int) -> float:
    """sqrt(6 ln(bU) / (b' U)): the UCB bonus after b blocks, b' of them on the arm."""
    _require(b >= 1 and b_prime >= 1 and U >= 1, f"b, b' and U must be >= 1, got b={b}, b'={b_prime}, U={U}.")
    return math.sqrt(6.0 * math.log(b * U) / (b_prime * U))


def dependent_upper_bound(K: int, U: int, T: int, delta_min: float | None, delta_max: float) -> float:
    """
    Problem-dependent upper bound on the egalitarian regret of EgalUCB:
    2136 (K - U) ln T / delta_min + 4 K delta_max / U.

    Raises:
        DomainError: If U >= K, T < 2, delta_min is absent or not positive,
            or delta_max is negative.
    """
    _require(1 <= U < K, f"The problem-dependent bound needs 1 <= U < K, got U={U}, K={K}.")
    _require(T >= 2, f"Horizon must be >= 2, got T={T}.")
    _require(delta_min is not None and delta_min > 0, f"delta_min must be defined and > 0, got {delta_min}.")
    _require(delta_max >= 0, f"delta_max must be >= 0, got {delta_max}.")
    return DEPENDENT_CONSTANT * (K - U) * math.log(T) / delta_min + 4.0 * K * delta_max / U


def independent_upper_bound(K: int, U: int, T: int) -> float:
    """sqrt(8544 (K - U) T ln T / U) + 4 K min{U, K - U} / U."""
    _require(1 <= U <= K, f"Need 1 <= U <= K, got U={U}, K={K}.")
    _require(T >= 2, f"Horizon must be >= 2, got T={T}.")
    return math.sqrt(INDEPENDENT_CONSTANT * (K - U) * T * math.log(T) / U) + 4.0 * K * min(U, K - U) / U


def lower_bound_value(K: int, U: int, T: int) -> float:
    """
    Policy-independent lower bound sqrt((K - U) T) / (76 U).

    Raises:
        DomainError: Unless K >= 2U (the bound's hypothesis) and T >= 1.
    """
    _require(U >= 1, f"U must be >= 1, got {U}.")
    _require(K >= 2 * U, f"The lower bound requires K >= 2U, got K={K}, U={U}.")
    _require(T >= 1, f"Horizon must be >= 1, got T={T}.")
    return math.sqrt((K - U) * T) / (LOWER_CONSTANT * U)


def hard_gap(K: int, U: int, T: int) -> float:
    """Mean gap sqrt((K - U) / (8 T U^2)) of the lower-bound instance."""
    _require(U >= 1, f"U must be >= 1, got {U}.")
    _require(K >= 2 * U, f"The hard instance requires K >= 2U, got K={K}, U={U}.")
    _require(T >= 1, f"Horizon must be >= 1, got T={T}.")
    return math.sqrt((K - U) / (8.0 * T * U * U))


def hard_instance(K: int, U: int, T: int) -> tuple[EgalMabInstance, float]:
    """
    Unit-variance Gaussian instance with mean delta on arms 1..U and 0 on the
    rest, where delta = sqrt((K - U) / (8 T U^2)).

    Raises:
        DomainError: If K < 2U, or if delta exceeds 1 so the means leave [0, 1]
            (that is, T < (K - U) / (8 U^2)).
    """
    delta = hard_gap(K, U, T)
    _require(delta <= 1.0, f"Hard-instance means leave [0, 1] for T={T}; need T >= (K - U) / (8 U^2).")
    arms = tuple(GaussianArm(delta if a <= U else 0.0, 1.0) for a in range(1, K + 1))
    return EgalMabInstance(arms), delta


def least_played_set(play_counts: Sequence[int], U: int) -> tuple[int, ...]:
    """
    The U arms among U+1..K with the fewest total plays.

    Ties resolve to the lexicographically smallest index set, which is the
    same as taking the smallest counts with ties by ascending index.

    Args:
        play_counts (Sequence[int]): Plays per arm, position a-1 for arm a.
        U (int): Number of users.

    Returns:
        tuple[int, ...]: 1-based arm indices in ascending order.
    """
    K = len(play_counts)
    _require(U >= 1 and K >= 2 * U, f"Need K >= 2U, got K={K}, U={U}.")
    candidates = sorted(range(U + 1, K + 1), key=lambda a: (play_counts[a - 1], a))
    return tuple(sorted(candidates[:U]))


def adversarial_partner(nu: EgalMabInstance, delta: float, U: int, play_counts: Sequence[int]) -> EgalMabInstance:
    """
    The alternative instance: arms of the least-played sub-optimal set get
    mean 2 delta, every other arm keeps its law from `nu`.

    Raises:
        DomainError: If K < 2U or `play_counts` does not cover all K arms.
    """
    _require(nu.K >= 2 * U, f"The partner instance requires K >= 2U, got K={nu.K}, U={U}.")
    _require(len(play_counts) == nu.K, f"play_counts must cover all {nu.K} arms, got {len(play_counts)}.")
    raised = set(least_played_set(list(play_counts), U))
    arms = tuple(
        GaussianArm(2.0 * delta, 1.0) if a in raised else nu.arms[a - 1]
        for a in range(1, nu.K + 1)
    )
    return EgalMabInstance(arms)
