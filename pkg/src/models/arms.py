from __future__ import annotations
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from errors import DomainError

"""
Reward laws for a single arm.
Every draw consumes exactly one standard uniform variate and maps it through
the arm's quantile function, so scalar and vectorised draws agree.
"""

# ndtri(0) is -inf; the smallest positive double keeps Gaussian draws finite.
UNIFORM_FLOOR = np.nextafter(0.0, 1.0)


@dataclass(frozen=True)
class ArmDistribution(ABC):
    """Contract for every arm reward law."""

    @property
    @abstractmethod
    def kind(self) -> str: ...

    @abstractmethod
    def mean(self) -> float:
        """Exact expectation of the distribution."""

    @abstractmethod
    def quantile(self, u: np.ndarray) -> np.ndarray:
        """Maps standard uniform variates in [0, 1) to rewards."""

    def sample(self, rng: np.random.Generator) -> float:
        """Draws one reward, consuming one uniform variate from `rng`."""
        return float(self.quantile(np.asarray(rng.random())))

    def sample_many(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draws `n` rewards in stream order."""
        return self.quantile(rng.random(n))


@dataclass(frozen=True)
class GaussianArm(ArmDistribution):
    mu: float
    std: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.mu):
            raise DomainError(f"Gaussian mean must be finite, got {self.mu}.")
        if not (self.std >= 0 and np.isfinite(self.std)):
            raise DomainError(f"Gaussian std must be finite and >= 0, got {self.std}.")

    @property
    def kind(self) -> str:
        return "gaussian"

    def mean(self) -> float:
        return float(self.mu)

    def quantile(self, u: np.ndarray) -> np.ndarray:
        if self.std == 0:
            return np.full(np.shape(u), float(self.mu))
        return self.mu + self.std * ndtri(np.maximum(u, UNIFORM_FLOOR))


@dataclass(frozen=True)
class BernoulliArm(ArmDistribution):
    p: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise DomainError(f"Bernoulli mean must lie in [0, 1], got {self.p}.")

    @property
    def kind(self) -> str:
        return "bernoulli"

    def mean(self) -> float:
        return float(self.p)

    def quantile(self, u: np.ndarray) -> np.ndarray:
        return np.where(u < self.p, 1.0, 0.0)


@dataclass(frozen=True)
class EmpiricalArm(ArmDistribution):
    """
    Uniform draw with replacement from a stored sample list, the implicit
    empirical distribution built from traces and ratings.
    """
    samples: tuple[float, ...]
    _values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        samples = tuple(float(x) for x in self.samples)
        if not samples:
            raise DomainError("Empirical arm needs at least one sample.")
        if not all(np.isfinite(samples)):
            raise DomainError("Empirical samples must be finite.")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "_values", np.asarray(samples, dtype=np.float64))

    @property
    def kind(self) -> str:
        return "empirical"

    @property
    def n_samples(self) -> int:
        return len(self.samples)

    def mean(self) -> float:
        return sum(self.samples) / len(self.samples)

    def quantile(self, u: np.ndarray) -> np.ndarray:
        n = len(self.samples)
        index = np.minimum((np.asarray(u) * n).astype(np.int64), n - 1)
        return self._values[index]
