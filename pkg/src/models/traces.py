from __future__ import annotations
from dataclasses import dataclass
from pathlib import Path

from errors import DomainError


@dataclass(frozen=True)
class SelectionMode:
    """How arms are picked among the distinct ids of a trace.

    `top-count` keeps the ids with the most entries; `random` draws ids
    uniformly with the given seed.
    """
    name: str = "top-count"
    seed: int | None = None

    @classmethod
    def parse(cls, text: str) -> SelectionMode:
        text = text.strip()
        if text == "top-count":
            return cls()
        if text.startswith("random:"):
            try:
                return cls("random", int(text.split(":", 1)[1]))
            except ValueError:
                pass
        raise DomainError(f"Unknown selection mode '{text}'. Use 'top-count' or 'random:SEED'.")

    def __str__(self) -> str:
        return self.name if self.seed is None else f"{self.name}:{self.seed}"


@dataclass(frozen=True)
class TraceSpec:
    """Where and how to read an (id, value) trace or ratings table."""
    path: Path
    id_column: str
    value_column: str
    negate: bool = False
    top_k: int = 1
    max_rows: int | None = None
    selection: SelectionMode = SelectionMode()

    def __post_init__(self):
        object.__setattr__(self, "path", Path(self.path))
        if self.top_k < 1:
            raise DomainError(f"top_k must be >= 1, got {self.top_k}.")
        if self.max_rows is not None and self.max_rows < 1:
            raise DomainError(f"max_rows must be >= 1 when set, got {self.max_rows}.")


@dataclass(frozen=True)
class IdMapEntry:
    arm_index: int
    original_id: str
    n_samples: int
    mean: float
