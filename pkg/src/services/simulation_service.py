from __future__ import annotations
import copy
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence, TYPE_CHECKING

import numpy as np
from tqdm import tqdm

from algorithms.egalucb import (
    block_schedule,
    egalucb_finalize_block,
    egalucb_init,
    egalucb_observe_block,
    egalucb_select,
)
from algorithms.gaps import check_users, gap_summary, suboptimality_gap
from algorithms.policies import make_policy
from errors import DomainError, HorizonError
from models.policies import PolicyKind
from models.results import AggregateResult, RunResult

if TYPE_CHECKING:
    from models.instances import EgalMabInstance

logger = logging.getLogger(__name__)


def check_horizon(T: int, U: int) -> None:
    """Raises HorizonError unless T is a positive multiple of U."""
    if T < U or T % U != 0:
        raise HorizonError(f"horizon not divisible by users: T={T}, U={U}.")


def block_gaps(instance: EgalMabInstance, U: int, arm_sets: np.ndarray) -> np.ndarray:
    """Sub-optimality gap of every block's arm set; repeated sets are computed once."""
    cache: dict[bytes, float] = {}
    gaps = np.empty(len(arm_sets), dtype=np.float64)
    for b, arm_set in enumerate(arm_sets):
        key = arm_set.tobytes()
        if key not in cache:
            cache[key] = suboptimality_gap(instance, U, arm_set)
        gaps[b] = cache[key]
    return gaps


def pseudo_regret_curve(run: RunResult, instance: EgalMabInstance, U: int) -> np.ndarray:
    """
    Egalitarian pseudo-regret at every block boundary.

    Each user plays every arm of a block once, so at t = bU every user's
    true-mean cumulative reward is the same and the regret increment of a
    block is exactly the gap of its arm set.

    Returns:
        np.ndarray: Non-decreasing curve with one value per block.
    """
    if run.U != U or run.arm_sets.shape[1] != U:
        raise DomainError(f"Run was recorded with U={run.U}, not U={U}.")
    return np.cumsum(block_gaps(instance, U, run.arm_sets))


def run_episode(instance: EgalMabInstance, U: int, T: int, kind: PolicyKind, seed: int) -> RunResult:
    """
    Executes one seeded episode of T / U blocks.

    Per block: the policy selects its arm set (the random baseline draws from
    the episode stream first), a (U, U) matrix of uniforms is drawn in
    (step, user) order, rewards are mapped through the played arms, and the
    policy observes and finalizes the block.

    Args:
        instance (EgalMabInstance): The environment.
        U (int): Number of users.
        T (int): Horizon, a multiple of U.
        kind (PolicyKind): Which policy assigns arms.
        seed (int): Seed of the single stream the episode owns.

    Returns:
        RunResult: Curves recorded at block boundaries. Identical arguments
            give bit-identical results.

    Raises:
        DomainError: If U is out of range.
        HorizonError: If T is not a positive multiple of U.
    """
    check_users(instance.K, U)
    check_horizon(T, U)
    rng = np.random.default_rng(seed)
    policy = make_policy(kind, instance, U, rng)

    n_blocks = T // U
    arm_sets = np.empty((n_blocks, U), dtype=np.int64)
    user_rewards = np.empty((n_blocks, U), dtype=np.float64)
    arm_plays = np.zeros(instance.K, dtype=np.int64)
    totals = np.zeros(U, dtype=np.float64)

    for b in range(n_blocks):
        arm_set = np.asarray(policy.select_arms(), dtype=np.int64)
        block = block_schedule(arm_set)
        rewards = instance.draw(block, rng.random((U, U)))
        policy.observe_block(block, rewards)
        for step_rewards in rewards:
            totals += step_rewards
        arm_sets[b] = arm_set
        user_rewards[b] = totals
        arm_plays[arm_set - 1] += U

    regret = np.cumsum(block_gaps(instance, U, arm_sets))
    logger.debug("[SimulationService] seed=%d %s U=%d T=%d final regret %.6g", seed, kind.value, U, T, regret[-1])
    return RunResult(
        seed=seed,
        T=T,
        U=U,
        policy=kind,
        arm_sets=arm_sets,
        user_rewards=user_rewards,
        pseudo_regret=regret,
        min_user_reward=user_rewards.min(axis=1),
        arm_plays=arm_plays,
    )


def _episode_task(args: tuple) -> RunResult:
    return run_episode(*args)


def aggregate_runs(runs: Sequence[RunResult], instance: EgalMabInstance) -> AggregateResult:
    """
    Pointwise mean, min and max of pseudo-regret over runs.

    Runs are sorted by seed first, so the reduction does not depend on the
    order in which episodes finished.
    """
    if not runs:
        raise DomainError("Cannot aggregate an empty set of runs.")
    runs = sorted(runs, key=lambda run: run.seed)
    first = runs[0]
    if any((run.U, run.T, run.policy) != (first.U, first.T, first.policy) for run in runs):
        raise DomainError("All aggregated runs must share U, T and policy.")

    regrets = np.vstack([run.pseudo_regret for run in runs])
    min_user = np.vstack([run.min_user_reward for run in runs])
    mu_star = gap_summary(instance, first.U).mu_star
    mean_min_user = min_user.mean(axis=0)
    return AggregateResult(
        policy=first.policy,
        T=first.T,
        U=first.U,
        seeds=tuple(run.seed for run in runs),
        times=first.times,
        mean_regret=regrets.mean(axis=0),
        min_regret=regrets.min(axis=0),
        max_regret=regrets.max(axis=0),
        mean_min_user_reward=mean_min_user,
        mean_curve_regret=first.times * mu_star / first.U - mean_min_user,
    )


def fit_loglog_slope(points: Sequence[tuple[float, float]]) -> float:
    """
    Least-squares slope of ln(y) against ln(x).

    A curve decaying like x^(-c) gives a slope of about -c.

    Raises:
        DomainError: On non-positive coordinates or fewer than two distinct x.
    """
    xs = np.array([p[0] for p in points], dtype=np.float64)
    ys = np.array([p[1] for p in points], dtype=np.float64)
    if len(xs) < 2 or len(np.unique(xs)) < 2:
        raise DomainError("A log-log fit needs at least two points with distinct x.")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise DomainError("A log-log fit needs strictly positive x and y.")
    log_x, log_y = np.log(xs), np.log(ys)
    dx = log_x - log_x.mean()
    return float(np.dot(dx, log_y - log_y.mean()) / np.dot(dx, dx))


def exact_expected_regret(instance: EgalMabInstance, U: int, T: int) -> float:
    """
    Exact expected pseudo-regret of EgalUCB on a Bernoulli instance, by
    enumerating every reward realization weighted by its probability.

    The tree has 2^(T U) leaves, so this is meant for tiny instances.

    Raises:
        DomainError: If any arm is not Bernoulli.
        HorizonError: If T is not a multiple of U.
    """
    if instance.family != "bernoulli":
        raise DomainError("Exact enumeration needs an all-Bernoulli instance.")
    check_users(instance.K, U)
    check_horizon(T, U)
    means = instance.means
    outcomes = [np.array(cells, dtype=np.float64).reshape(U, U) for cells in itertools.product((0.0, 1.0), repeat=U * U)]

    def expand(state, blocks_left: int) -> float:
        if blocks_left == 0:
            return 0.0
        arm_set = egalucb_select(state)
        block = block_schedule(arm_set)
        p = means[block - 1]
        expected = suboptimality_gap(instance, U, arm_set)
        for rewards in outcomes:
            weight = math.prod(np.where(rewards == 1.0, p, 1.0 - p).ravel())
            if weight == 0.0:
                continue
            child = copy.deepcopy(state)
            egalucb_observe_block(child, block, rewards)
            egalucb_finalize_block(child)
            expected += weight * expand(child, blocks_left - 1)
        return expected

    return expand(egalucb_init(instance.K, U), T // U)


class SimulationService:
    """
    Runs replicated episodes, optionally over a process pool.
    """

    def __init__(self, workers: int = 1, progress: bool = False):
        """
        Initializes the SimulationService.

        Args:
            workers (int): Number of worker processes; 1 runs in-process.
            progress (bool): Show a tqdm bar on stderr while episodes run.
        """
        if workers < 1:
            raise DomainError(f"workers must be >= 1, got {workers}.")
        self.workers = workers
        self.progress = progress

    def run_many(
        self, instance: EgalMabInstance, U: int, T: int, kind: PolicyKind, n_runs: int, base_seed: int
    ) -> list[RunResult]:
        """
        Runs episodes with seeds base_seed, ..., base_seed + n_runs - 1.

        Returns:
            list[RunResult]: Results sorted by seed.
        """
        if n_runs < 1:
            raise DomainError(f"n_runs must be >= 1, got {n_runs}.")
        check_users(instance.K, U)
        check_horizon(T, U)
        tasks = [(instance, U, T, kind, base_seed + i) for i in range(n_runs)]
        logger.info("[SimulationService] %d %s episodes, K=%d U=%d T=%d", n_runs, kind.value, instance.K, U, T)

        bar = tqdm(total=n_runs, disable=not self.progress, desc=f"U={U}", leave=False)
        try:
            if self.workers == 1 or n_runs == 1:
                runs = []
                for task in tasks:
                    runs.append(_episode_task(task))
                    bar.update()
            else:
                with ProcessPoolExecutor(max_workers=min(self.workers, n_runs)) as pool:
                    runs = []
                    for run in pool.map(_episode_task, tasks):
                        runs.append(run)
                        bar.update()
        finally:
            bar.close()
        return sorted(runs, key=lambda run: run.seed)

    def replicate(
        self, instance: EgalMabInstance, U: int, T: int, kind: PolicyKind, n_runs: int, base_seed: int
    ) -> AggregateResult:
        """Runs `n_runs` seeded episodes and aggregates their pseudo-regret."""
        return aggregate_runs(self.run_many(instance, U, T, kind, n_runs, base_seed), instance)
