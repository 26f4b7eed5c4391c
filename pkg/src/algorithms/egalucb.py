from __future__ import annotations
import math
from typing import Sequence

import numpy as np

from errors import DomainError, StateError
from models.instances import Assignment
from models.policies import EgalUcbState
from .gaps import check_users

"""
The EgalUCB state machine.

Each block selects the U arms with the highest upper confidence bounds and
rotates them among the users for U steps, so every user plays every arm of
the block exactly once. Arm indices are 1-based at this interface.
"""

# Constant in the confidence radius sqrt(6 ln(bU) / (B U)).
EXPLORATION_CONSTANT = 6.0


def egalucb_init(K: int, U: int) -> EgalUcbState:
    """Fresh state: zero counters, infinite UCBs, identity rotation."""
    check_users(K, U)
    return EgalUcbState(K=K, U=U)


def egalucb_select(state: EgalUcbState) -> tuple[int, ...]:
    """
    Picks the U arms with the highest UCB.

    Unplayed arms (infinite UCB) rank above every finite value; all ties go
    to the lower arm index. This equals the argmax of summed UCBs over all
    U-subsets with ties resolved to the lexicographically smallest set.

    Returns:
        tuple[int, ...]: The selected arms in ascending order.
    """
    # -inf first, then stable order keeps equal UCBs in index order
    order = np.argsort(-state.ucb, kind="stable")
    return tuple(int(a) + 1 for a in np.sort(order[: state.U]))


def schedule_positions(U: int, step_in_block: int) -> tuple[int, ...]:
    """
    The 1-based index vector `ind` used at a step of a block: identity at
    step 1, circularly shifted right once per step after that.
    """
    if not 1 <= step_in_block <= U:
        raise DomainError(f"Step in block must lie in [1, {U}], got {step_in_block}.")
    shift = step_in_block - 1
    return tuple((u - shift) % U + 1 for u in range(U))


def egalucb_schedule(arm_set: Sequence[int], state: EgalUcbState | None, step_in_block: int) -> Assignment:
    """
    Assigns the block's arms to users for one step: user u receives
    `arm_set[ind[u]]`.

    Args:
        arm_set (Sequence[int]): The block's U arms in ascending order.
        state (EgalUcbState | None): When given, its `rr_index` is advanced
            to the vector for the next step.
        step_in_block (int): 1-based step within the block.

    Returns:
        Assignment: Arms per user for this step.
    """
    arms = tuple(int(a) for a in arm_set)
    U = len(arms)
    if U == 0:
        raise DomainError("Arm set must not be empty.")
    ind = schedule_positions(U, step_in_block)
    if state is not None:
        if state.U != U:
            raise DomainError(f"Arm set has {U} arms but the state serves U={state.U} users.")
        state.rr_index = ind[-1:] + ind[:-1]
    return Assignment(tuple(arms[i - 1] for i in ind))


def block_schedule(arm_set: Sequence[int]) -> np.ndarray:
    """
    All U steps of a block at once.

    Returns:
        np.ndarray: (U, U) matrix whose row s is the assignment of step s + 1.
    """
    arms = np.asarray(arm_set, dtype=np.int64)
    U = len(arms)
    users = np.arange(U)
    steps = np.arange(U)[:, None]
    return arms[(users - steps) % U]


def egalucb_observe(state: EgalUcbState, assignment: Assignment, rewards: Sequence[float]) -> EgalUcbState:
    """
    Adds each user's reward to the cumulative reward of the arm it played.

    Raises:
        DomainError: If the assignment, rewards and state disagree on U.
        StateError: If more than U steps are observed in one block.
    """
    rewards = np.asarray(rewards, dtype=np.float64)
    if assignment.U != len(rewards) or assignment.U != state.U:
        raise DomainError(
            f"Length mismatch: assignment has {assignment.U} users, "
            f"rewards {len(rewards)}, state U={state.U}."
        )
    if state.steps_observed >= state.U:
        raise StateError("A block holds exactly U steps; finalize it before observing more.")
    for arm, reward in zip(assignment.user_to_arm, rewards):
        state.cum_reward[arm - 1] += reward
        state.block_arms.add(arm)
    state.steps_observed += 1
    return state


def egalucb_observe_block(state: EgalUcbState, block: np.ndarray, rewards: np.ndarray) -> EgalUcbState:
    """
    Observes a whole block produced by `block_schedule`.

    Accumulation order is step by step, users ascending, which makes the
    result identical to U calls of `egalucb_observe`.
    """
    if state.steps_observed != 0:
        raise StateError("Block observation requires a freshly finalized state.")
    if block.shape != (state.U, state.U) or rewards.shape != block.shape:
        raise DomainError(f"Block and rewards must both have shape ({state.U}, {state.U}).")
    # each step row is a permutation of the block's arms, so indices never repeat within a row
    for step_arms, step_rewards in zip(block - 1, rewards):
        state.cum_reward[step_arms] += step_rewards
    state.block_arms.update(block[0].tolist())
    state.steps_observed = state.U
    return state


def egalucb_finalize_block(state: EgalUcbState) -> EgalUcbState:
    """
    Closes the block: increments the block counter and the block counts of
    the played arms, then recomputes the UCB of every arm played at least
    once. Unplayed arms keep an infinite UCB.

    Raises:
        StateError: If fewer than U steps were observed since the last call.
    """
    if state.steps_observed != state.U:
        raise StateError(
            f"finalize called mid-block: {state.steps_observed} of {state.U} steps observed."
        )
    state.block += 1
    for arm in state.block_arms:
        state.blocks_played[arm - 1] += 1

    played = state.blocks_played > 0
    plays = state.blocks_played[played] * state.U
    log_term = math.log(state.block * state.U)
    state.ucb[played] = state.cum_reward[played] / plays + np.sqrt(EXPLORATION_CONSTANT * log_term / plays)

    state.block_arms = set()
    state.steps_observed = 0
    state.rr_index = tuple(range(1, state.U + 1))
    return state
