from __future__ import annotations
import logging
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from errors import ConfigError, DomainError
from models.generators import GeneratorSpec
from models.policies import PolicyKind
from models.traces import SelectionMode

logger = logging.getLogger(__name__)

Mode = Literal["simulate", "sweep-users", "bounds", "ingest-run"]

# Keys that locate output rather than define the experiment.
NON_PROVENANCE_KEYS = frozenset({"out"})


def parse_users(text: str | int | list | tuple) -> tuple[int, ...]:
    """
    Parses a user count list: `3`, `1-5`, `2,4,8`, `1-3,8` or `2:20:2`
    (start:stop:step, stop inclusive).

    Raises:
        DomainError: On malformed items, counts below 1 or duplicates.
    """
    if isinstance(text, int):
        users = [text]
    elif isinstance(text, (list, tuple)):
        users = [int(u) for u in text]
    else:
        text = str(text).strip()
        try:
            if ":" in text:
                start, stop, step = (int(x) for x in text.split(":"))
                if step < 1:
                    raise DomainError(f"Step of '{text}' must be >= 1.")
                users = list(range(start, stop + 1, step))
            else:
                users = []
                for item in text.split(","):
                    low, dash, high = item.strip().partition("-")
                    users.extend(range(int(low), int(high) + 1) if dash else [int(low)])
        except ValueError:
            raise DomainError(f"Cannot read user counts from '{text}'.") from None
    if not users:
        raise DomainError(f"'{text}' lists no user counts.")
    if min(users) < 1:
        raise DomainError(f"User counts must be >= 1, got {min(users)}.")
    if len(set(users)) != len(users):
        raise DomainError(f"'{text}' lists a user count twice.")
    return tuple(users)


class ExperimentConfig(BaseModel):
    """
    Fully resolved settings of one command.

    Every field is validated before any simulation starts. `K` doubles as the
    number of ids kept by `ingest-run`.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    mode: Mode
    K: int | None = Field(default=None, ge=1)
    U: tuple[int, ...] = (1,)
    T: int | None = Field(default=None, ge=1)
    runs: int = Field(default=1, ge=1)
    seed: int | None = Field(default=None, ge=0)
    policy: PolicyKind = PolicyKind.EGALUCB
    out: Path = Path("results")
    round_horizon: bool = False
    gen: tuple[str, ...] = ()
    instance: Path | None = None
    save_instance: Path | None = None
    delta_min: float | None = None
    delta_max: float | None = None
    trace: Path | None = None
    id_column: str = "id"
    value_column: str = "value"
    negate: bool = False
    max_rows: int | None = Field(default=None, ge=1)
    select: str = "top-count"
    fit_slope: bool = False
    record_every: int = Field(default=1, ge=1)
    summary: bool = False

    @field_validator("U", mode="before")
    @classmethod
    def _users(cls, value: Any) -> tuple[int, ...]:
        try:
            return parse_users(value)
        except DomainError as e:
            raise ConfigError(str(e), key="U") from None

    @field_validator("gen", mode="before")
    @classmethod
    def _gen(cls, value: Any) -> tuple[str, ...]:
        items = tuple(value.split()) if isinstance(value, str) else tuple(value)
        try:
            GeneratorSpec.parse(items)
        except DomainError as e:
            raise ConfigError(str(e), key="gen") from None
        return items

    @field_validator("policy", mode="before")
    @classmethod
    def _policy(cls, value: Any) -> PolicyKind:
        try:
            return PolicyKind.from_label(value)
        except ValueError as e:
            raise ConfigError(str(e), key="policy") from None

    @field_validator("select")
    @classmethod
    def _select(cls, value: str) -> str:
        try:
            return str(SelectionMode.parse(value))
        except DomainError as e:
            raise ConfigError(str(e), key="select") from None

    @model_validator(mode="after")
    def _consistent(self) -> ExperimentConfig:
        sources = [name for name, given in (("gen", self.gen), ("instance", self.instance), ("trace", self.trace)) if given]
        if len(sources) > 1:
            raise ConfigError(f"Choose one instance source, got {' and '.join(sources)}.", key=sources[1])
        if self.mode == "ingest-run":
            self._require("trace", "K", "T", "seed")
        elif self.trace is not None:
            raise ConfigError(f"--trace is only used by ingest-run, not {self.mode}.", key="trace")
        if self.mode in ("simulate", "sweep-users"):
            self._require("T", "seed")
        if self.mode == "bounds":
            self._require("T")
            if self.instance is None and not self.gen:
                self._require("K")
            if (self.delta_min is not None or self.delta_max is not None) and sources:
                raise ConfigError("Give either an instance or --delta-min/--delta-max, not both.", key="delta_min")
        elif self.delta_min is not None or self.delta_max is not None:
            raise ConfigError(f"Gaps are only used by bounds, not {self.mode}.", key="delta_min")
        if self.instance is None and self.mode != "bounds":
            self._require("K")

        if self.fit_slope and (self.mode == "bounds" or len(self.U) < 2):
            raise ConfigError("fit_slope needs a simulation over at least two user counts.", key="fit_slope")

        if self.K is not None and self.instance is None:
            for u in self.U:
                if u > self.K:
                    raise ConfigError(f"U={u} exceeds K={self.K}.", key="U")
        if self.T is not None and self.mode != "bounds" and not self.round_horizon:
            for u in self.U:
                if self.T < u or self.T % u != 0:
                    raise ConfigError(
                        f"horizon not divisible by users: T={self.T}, U={u} (use --round-horizon).", key="T"
                    )
        return self

    def _require(self, *keys: str) -> None:
        for key in keys:
            if getattr(self, key) is None:
                raise ConfigError(f"{self.mode} needs '{key}'.", key=key)

    @classmethod
    def resolve(cls, values: dict[str, Any]) -> ExperimentConfig:
        """
        Validates raw settings, turning pydantic errors into a ConfigError
        that names the offending key.
        """
        try:
            return cls(**values)
        except ValidationError as e:
            error = e.errors()[0]
            key = str(error["loc"][0]) if error["loc"] else None
            if error["type"] == "extra_forbidden":
                raise ConfigError(f"unknown key '{key}'", key=key) from None
            raise ConfigError(f"invalid '{key}': {error['msg']}", key=key) from None

    @property
    def generator(self) -> GeneratorSpec:
        return GeneratorSpec.parse(self.gen)

    @property
    def selection(self) -> SelectionMode:
        return SelectionMode.parse(self.select)

    @property
    def multi_user(self) -> bool:
        return len(self.U) > 1

    def horizon_for(self, U: int) -> int:
        """T, rounded down to a multiple of U when `round_horizon` is set."""
        if self.T is None:
            raise ConfigError(f"{self.mode} needs 'T'.", key="T")
        if not self.round_horizon or self.T % U == 0:
            return self.T
        rounded = self.T - self.T % U
        if rounded < U:
            raise ConfigError(f"T={self.T} is below U={U}; nothing to round to.", key="T")
        logger.warning("[ExperimentConfig] Rounding horizon T=%d down to %d for U=%d.", self.T, rounded, U)
        return rounded

    def provenance_lines(self) -> list[str]:
        """
        `key=value` lines, sorted by key, from which `resolve` rebuilds this
        config. Unset keys and output locations are left out.
        """
        lines = []
        for key in sorted(type(self).model_fields):
            value = getattr(self, key)
            if key in NON_PROVENANCE_KEYS or value is None or value == ():
                continue
            if key == "U":
                text = ",".join(str(u) for u in value)
            elif key == "gen":
                text = " ".join(value)
            elif isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, PolicyKind):
                text = value.value
            elif isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            lines.append(f"{key}={text}")
        return lines
