from __future__ import annotations
import logging
from pathlib import Path
from typing import Sequence, TYPE_CHECKING
try:
    from typing import override
except ImportError:  # Python < 3.12
    from typing_extensions import override

import numpy as np
import pandas as pd

from errors import DomainError
from repositories.base_repository import BaseRepository

if TYPE_CHECKING:
    from models.bounds import BoundReport
    from models.results import AggregateResult, RunResult, SweepRow
    from models.traces import IdMapEntry

logger = logging.getLogger(__name__)

RUN_COLUMNS = ["policy", "run_seed", "t", "pseudo_regret", "min_user_cum_reward"]
AGGREGATE_COLUMNS = ["policy", "t", "mean_regret", "min_regret", "max_regret", "n_runs"]
SWEEP_COLUMNS = ["policy", "U", "T", "mean_regret", "min_regret", "max_regret", "n_runs"]
SLOPE_COLUMNS = ["x", "y", "slope"]
BOUND_COLUMNS = ["K", "U", "T", "delta_min", "delta_max", "dep_upper", "indep_upper", "lower"]
ID_MAP_COLUMNS = ["arm_index", "original_id", "n_samples", "mean"]


def _optional(value: float | None) -> float:
    return np.nan if value is None else value


def recorded_blocks(n_blocks: int, record_every: int) -> np.ndarray:
    """Block positions kept when thinning: every `record_every`-th boundary plus the last."""
    if record_every < 1:
        raise DomainError(f"record_every must be >= 1, got {record_every}.")
    keep = np.arange(record_every - 1, n_blocks, record_every)
    if len(keep) == 0 or keep[-1] != n_blocks - 1:
        keep = np.append(keep, n_blocks - 1)
    return keep


class ResultRepository(BaseRepository):
    """
    Writes experiment outputs as CSV files with `#` provenance headers.

    Writes between `begin()` and `commit()` form one transaction: `rollback()`
    deletes every file written since `begin()`, so a failed experiment leaves
    no partial output behind.
    """

    def __init__(self):
        self._written: list[Path] | None = None

    def begin(self) -> None:
        if self._written is not None:
            logger.warning("[ResultRepository WARN] Transaction already in progress.")
            return
        self._written = []

    def commit(self) -> list[Path]:
        """Ends the transaction and returns the files it wrote."""
        if self._written is None:
            logger.warning("[ResultRepository WARN] Commit called but no transaction is active.")
            return []
        written, self._written = self._written, None
        logger.info("[ResultRepository] Committed %d files.", len(written))
        return written

    def rollback(self) -> None:
        """Deletes every file written since `begin()`."""
        if self._written is None:
            logger.warning("[ResultRepository WARN] Rollback called but no transaction is active.")
            return
        try:
            for path in self._written:
                path.unlink(missing_ok=True)
            logger.info("[ResultRepository] Rolled back %d files.", len(self._written))
        finally:
            self._written = None

    @override
    def read(self, path: str | Path) -> pd.DataFrame:
        """Reads a result CSV back, skipping its provenance header."""
        return self._read_csv(path, comment="#")

    def read_header(self, path: str | Path) -> dict[str, str]:
        """Returns the `# key=value` provenance lines of a result file as a dict."""
        header = {}
        with open(path, encoding="utf-8") as f:
            for line in f:
                if not line.startswith("# "):
                    break
                key, _, value = line[2:].rstrip("\n").partition("=")
                header[key] = value
        return header

    @override
    def write(self, path: str | Path, data: pd.DataFrame, header_lines: list[str] | None = None) -> Path:
        path = self._write_csv(path, data, header_lines)
        if self._written is not None:
            self._written.append(path)
        return path

    def write_runs(self, path: str | Path, runs: Sequence[RunResult], header_lines: list[str] | None = None,
                   record_every: int = 1) -> Path:
        """One row per run and recorded block boundary."""
        frames = []
        for run in runs:
            keep = recorded_blocks(run.n_blocks, record_every)
            frames.append(pd.DataFrame({
                "policy": run.policy.value,
                "run_seed": run.seed,
                "t": run.times[keep],
                "pseudo_regret": run.pseudo_regret[keep],
                "min_user_cum_reward": run.min_user_reward[keep],
            }))
        frame = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=RUN_COLUMNS)
        return self.write(path, frame[RUN_COLUMNS], header_lines)

    def write_aggregate(self, path: str | Path, aggregate: AggregateResult, header_lines: list[str] | None = None,
                        record_every: int = 1) -> Path:
        keep = recorded_blocks(len(aggregate.times), record_every)
        frame = pd.DataFrame({
            "policy": aggregate.policy.value,
            "t": aggregate.times[keep],
            "mean_regret": aggregate.mean_regret[keep],
            "min_regret": aggregate.min_regret[keep],
            "max_regret": aggregate.max_regret[keep],
            "n_runs": aggregate.n_runs,
        })
        return self.write(path, frame[AGGREGATE_COLUMNS], header_lines)

    def write_sweep(self, path: str | Path, rows: Sequence[SweepRow], header_lines: list[str] | None = None) -> Path:
        frame = pd.DataFrame(
            [(r.policy.value, r.U, r.T, r.mean_regret, r.min_regret, r.max_regret, r.n_runs) for r in rows],
            columns=SWEEP_COLUMNS,
        )
        return self.write(path, frame, header_lines)

    def write_slope(self, path: str | Path, points: Sequence[tuple[float, float]], slope: float,
                    header_lines: list[str] | None = None) -> Path:
        frame = pd.DataFrame(
            {"x": [float(x) for x, _ in points], "y": [float(y) for _, y in points], "slope": float(slope)}
        )
        return self.write(path, frame[SLOPE_COLUMNS], header_lines)

    def bounds_frame(self, reports: Sequence[BoundReport]) -> pd.DataFrame:
        return pd.DataFrame([{
            "K": report.K,
            "U": report.U,
            "T": report.T,
            "delta_min": _optional(report.delta_min),
            "delta_max": _optional(report.delta_max),
            "dep_upper": _optional(report.dependent_upper),
            "indep_upper": report.independent_upper,
            "lower": _optional(report.lower),
        } for report in reports], columns=BOUND_COLUMNS)

    def format_bounds(self, reports: Sequence[BoundReport]) -> str:
        """The reports as header plus one CSV row each, formatted exactly as in bounds.csv."""
        return self.bounds_frame(reports).to_csv(index=False, float_format="%.17g", lineterminator="\n")

    def write_bounds(self, path: str | Path, reports: Sequence[BoundReport],
                     header_lines: list[str] | None = None) -> Path:
        return self.write(path, self.bounds_frame(reports), header_lines)

    def write_id_map(self, path: str | Path, entries: Sequence[IdMapEntry], header_lines: list[str] | None = None) -> Path:
        frame = pd.DataFrame(
            [(e.arm_index, e.original_id, e.n_samples, e.mean) for e in entries],
            columns=ID_MAP_COLUMNS,
        )
        return self.write(path, frame, header_lines)
