from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from errors import DomainError


class MeansSource(Enum):
    UNIFORM = "uniform-means"
    TOP_U = "top-u-means"
    LIST = "means"
    HARD = "hard"


def _numbers(item: str, text: str, count: int | None = None) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise DomainError(f"Generator '{item}' has a non-numeric parameter.") from None
    if count is not None and len(values) != count:
        raise DomainError(f"Generator '{item}' takes {count} parameters, got {len(values)}.")
    return values


@dataclass(frozen=True)
class GeneratorSpec:
    """
    A synthetic instance recipe: an arm family plus a source of means.

    Built from `--gen` items such as `gaussian:0.5`, `bernoulli`,
    `uniform-means:0.01,0.99,7`, `top-u-means:0.8,0.5`, `means:0.9,0.1`
    or `hard`. The family defaults to unit-variance Gaussian and the means
    to uniform draws on [0.01, 0.99]; an omitted uniform seed falls back to
    the experiment seed.
    """
    family: str = "gaussian"
    std: float = 1.0
    source: MeansSource = MeansSource.UNIFORM
    params: tuple[float, ...] = (0.01, 0.99)
    means_seed: int | None = None

    @classmethod
    def parse(cls, items: Sequence[str]) -> GeneratorSpec:
        fields: dict = {}
        for item in items:
            name, _, arg = item.strip().partition(":")
            if name == "gaussian":
                fields["family"] = "gaussian"
                fields["std"] = _numbers(item, arg, 1)[0] if arg else 1.0
                if fields["std"] < 0:
                    raise DomainError(f"Gaussian std must be >= 0, got {fields['std']}.")
            elif name == "bernoulli" and not arg:
                fields["family"] = "bernoulli"
            elif name == MeansSource.UNIFORM.value:
                values = _numbers(item, arg)
                if len(values) not in (2, 3):
                    raise DomainError(f"Generator '{item}' takes lo,hi[,seed].")
                lo, hi = values[:2]
                if not lo <= hi:
                    raise DomainError(f"Generator '{item}' needs lo <= hi.")
                fields["source"], fields["params"] = MeansSource.UNIFORM, (lo, hi)
                if len(values) == 3:
                    if not values[2].is_integer():
                        raise DomainError(f"Generator '{item}' needs an integer seed.")
                    fields["means_seed"] = int(values[2])
            elif name == MeansSource.TOP_U.value:
                fields["source"], fields["params"] = MeansSource.TOP_U, _numbers(item, arg, 2)
            elif name == MeansSource.LIST.value:
                values = _numbers(item, arg)
                if not values:
                    raise DomainError(f"Generator '{item}' needs at least one mean.")
                fields["source"], fields["params"] = MeansSource.LIST, values
            elif name == MeansSource.HARD.value and not arg:
                fields["source"], fields["params"] = MeansSource.HARD, ()
            else:
                raise DomainError(
                    f"Unknown generator '{item}'. Use gaussian[:STD], bernoulli, uniform-means:LO,HI[,SEED], "
                    "top-u-means:HIGH,LOW, means:M1,M2,... or hard."
                )
        spec = cls(**fields)
        if spec.source is MeansSource.HARD and spec.family != "gaussian":
            raise DomainError("The hard instance is Gaussian; drop 'bernoulli'.")
        return spec

    @property
    def depends_on_users(self) -> bool:
        """True when the instance changes with U (and so is rebuilt per U in a sweep)."""
        return self.source in (MeansSource.TOP_U, MeansSource.HARD)
