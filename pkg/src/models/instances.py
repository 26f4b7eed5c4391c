from __future__ import annotations
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from errors import DomainError
from .arms import UNIFORM_FLOOR, ArmDistribution, BernoulliArm, GaussianArm

"""
Environment, assignment and gap models.
Arm indices exposed by these models are 1-based; numpy views are 0-based.
"""


@dataclass(frozen=True)
class EgalMabInstance:
    """
    The environment: an ordered collection of K arm distributions.
    No ordering of the means is assumed; sorted views are computed on demand.
    """
    arms: tuple[ArmDistribution, ...]
    _means: np.ndarray = field(init=False, repr=False, compare=False)
    _stds: np.ndarray | None = field(init=False, repr=False, compare=False)
    _family: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        arms = tuple(self.arms)
        if not arms:
            raise DomainError("An instance needs at least one arm (K >= 1).")
        kinds = {arm.kind for arm in arms}
        family = kinds.pop() if len(kinds) == 1 else "mixed"
        stds = np.array([arm.std for arm in arms], dtype=np.float64) if family == "gaussian" else None
        object.__setattr__(self, "arms", arms)
        object.__setattr__(self, "_means", np.array([arm.mean() for arm in arms], dtype=np.float64))
        object.__setattr__(self, "_stds", stds)
        object.__setattr__(self, "_family", family)

    @property
    def K(self) -> int:
        return len(self.arms)

    @property
    def family(self) -> str:
        """'gaussian', 'bernoulli', 'empirical' or 'mixed'."""
        return self._family

    @property
    def means(self) -> np.ndarray:
        """Copy of the arm means, indexed 0..K-1."""
        return self._means.copy()

    def arm(self, index: int) -> ArmDistribution:
        """Returns the arm with 1-based `index`."""
        if not 1 <= index <= self.K:
            raise DomainError(f"Arm index {index} is out of range [1, {self.K}].")
        return self.arms[index - 1]

    def draw(self, arm_indices: np.ndarray, u: np.ndarray) -> np.ndarray:
        """
        Maps uniform variates to rewards of the given arms cell by cell.

        The result is identical to calling each arm's `quantile` on its own
        cells; homogeneous Gaussian and Bernoulli instances take a vectorised
        path.

        Args:
            arm_indices (np.ndarray): 1-based arm index for every cell.
            u (np.ndarray): Uniform variates with the same shape.

        Returns:
            np.ndarray: Rewards with the same shape.
        """
        zero_based = np.asarray(arm_indices, dtype=np.int64) - 1
        u = np.asarray(u, dtype=np.float64)
        if self._family == "bernoulli":
            return np.where(u < self._means[zero_based], 1.0, 0.0)
        if self._family == "gaussian":
            return self._means[zero_based] + self._stds[zero_based] * ndtri(np.maximum(u, UNIFORM_FLOOR))

        flat_arms = zero_based.ravel()
        flat_u = u.ravel()
        rewards = np.empty(flat_u.shape, dtype=np.float64)
        order = np.argsort(flat_arms, kind="stable")
        arms_sorted = flat_arms[order]
        starts = np.flatnonzero(np.r_[True, arms_sorted[1:] != arms_sorted[:-1]])
        for start, stop in zip(starts, np.r_[starts[1:], len(order)]):
            cells = order[start:stop]
            rewards[cells] = self.arms[arms_sorted[start]].quantile(flat_u[cells])
        return rewards.reshape(u.shape)

    @classmethod
    def gaussian(cls, means, std: float = 1.0) -> EgalMabInstance:
        return cls(tuple(GaussianArm(float(m), std) for m in means))

    @classmethod
    def bernoulli(cls, means) -> EgalMabInstance:
        return cls(tuple(BernoulliArm(float(m)) for m in means))


@dataclass(frozen=True)
class Assignment:
    """Arms given to users 1..U at one time step (1-based arm indices)."""
    user_to_arm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "user_to_arm", tuple(int(a) for a in self.user_to_arm))

    @property
    def U(self) -> int:
        return len(self.user_to_arm)


@dataclass(frozen=True)
class GapSummary:
    """
    Optimum and gap quantities for a given number of users.
    `delta_min` is None when U = K or when the U-th and (U+1)-th largest
    means tie; bounds that divide by it refuse to evaluate in that case.
    """
    mu_star: float
    delta_min: float | None
    delta_max: float
    top_set: tuple[int, ...]
