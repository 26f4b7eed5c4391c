from __future__ import annotations
import math
from typing import Iterable, TYPE_CHECKING

from errors import DomainError
from models.instances import Assignment, GapSummary

if TYPE_CHECKING:
    from models.instances import EgalMabInstance


def check_users(K: int, U: int) -> None:
    """Raises DomainError unless 1 <= U <= K."""
    if not 1 <= U <= K:
        raise DomainError(f"Number of users must satisfy 1 <= U <= K, got U={U}, K={K}.")


def ranked_arms(instance: EgalMabInstance) -> list[int]:
    """1-based arm indices sorted by mean descending, ties by ascending index."""
    means = instance.means
    return sorted(range(1, instance.K + 1), key=lambda a: (-means[a - 1], a))


def gap_summary(instance: EgalMabInstance, U: int) -> GapSummary:
    """
    Computes mu_star, the minimum and maximum sub-optimality gaps and the
    optimal arm set for U users.

    Sums use math.fsum, so equal multisets of means give bit-equal sums and
    gaps of optimal sets are exactly zero.

    Args:
        instance (EgalMabInstance): The environment.
        U (int): Number of users, 1 <= U <= K.

    Returns:
        GapSummary: The optimum and gap quantities.

    Raises:
        DomainError: If U is out of range.
    """
    K = instance.K
    check_users(K, U)
    means = instance.means
    ranked = ranked_arms(instance)
    descending = [means[a - 1] for a in ranked]

    mu_star = math.fsum(descending[:U])
    delta_max = mu_star - math.fsum(descending[K - U:])
    delta_min = None
    if U < K and descending[U - 1] != descending[U]:
        delta_min = descending[U - 1] - descending[U]
    return GapSummary(
        mu_star=mu_star,
        delta_min=delta_min,
        delta_max=delta_max,
        top_set=tuple(sorted(ranked[:U])),
    )


def _check_arm_set(arm_set: Iterable[int], K: int, U: int) -> tuple[int, ...]:
    arms = tuple(int(a) for a in arm_set)
    if len(arms) != U:
        raise DomainError(f"Arm set must contain exactly U={U} arms, got {len(arms)}.")
    if len(set(arms)) != U:
        raise DomainError(f"Arm set contains repeated arms: {arms}.")
    for a in arms:
        if not 1 <= a <= K:
            raise DomainError(f"Arm index {a} is out of range [1, {K}].")
    return arms


def suboptimality_gap(instance: EgalMabInstance, U: int, arm_set: Iterable[int]) -> float:
    """
    Gap between the best achievable mean-sum and the mean-sum of `arm_set`.

    Args:
        instance (EgalMabInstance): The environment.
        U (int): Number of users.
        arm_set (Iterable[int]): U distinct 1-based arm indices.

    Returns:
        float: mu_star - mu_A, never negative.

    Raises:
        DomainError: On wrong cardinality, repeated or out-of-range arms.
    """
    check_users(instance.K, U)
    arms = _check_arm_set(arm_set, instance.K, U)
    means = instance.means
    mu_star = gap_summary(instance, U).mu_star
    return mu_star - math.fsum(means[a - 1] for a in arms)


def validate_assignment(assignment: Assignment, K: int, U: int) -> tuple[bool, str]:
    """
    Checks that an assignment gives U users pairwise distinct arms in [K].

    Returns:
        tuple[bool, str]: `(True, message)` when valid, otherwise `False` and
            the first violation found (length, then per-user range and
            duplicates in user order).
    """
    arms = assignment.user_to_arm
    if U > K:
        return (False, f"U={U} exceeds K={K}; a collision-free assignment is impossible.")
    if len(arms) != U:
        return (False, f"wrong length: expected {U} users, got {len(arms)}")

    first_user: dict[int, int] = {}
    for user, arm in enumerate(arms, start=1):
        if not 1 <= arm <= K:
            return (False, f"index out of range: arm {arm} of user {user} not in [1, {K}]")
        if arm in first_user:
            return (False, f"duplicate arm {arm} (users {first_user[arm]} and {user})")
        first_user[arm] = user
    return (True, "Assignment is collision-free.")
