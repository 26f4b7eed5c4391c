from __future__ import annotations
import logging
from typing import TYPE_CHECKING

import numpy as np

from algorithms.gaps import gap_summary
from errors import IngestError
from models.arms import EmpiricalArm
from models.instances import EgalMabInstance
from models.traces import IdMapEntry

if TYPE_CHECKING:
    from models.traces import TraceSpec
    from repositories.trace_repository import TraceRepository

logger = logging.getLogger(__name__)


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def instance_summary(instance: EgalMabInstance, U: int) -> str:
    """
    Human-readable report of an instance: `#` lines with K, U and the gap
    summary, then one CSV row per arm (`arm_index,kind,n_samples,mean`).
    `n_samples` is empty for parametric arms.
    """
    summary = gap_summary(instance, U)
    lines = [
        f"# K={instance.K}",
        f"# U={U}",
        f"# mu_star={_fmt(summary.mu_star)}",
        f"# delta_min={'undefined' if summary.delta_min is None else _fmt(summary.delta_min)}",
        f"# delta_max={_fmt(summary.delta_max)}",
        f"# top_set={','.join(str(a) for a in summary.top_set)}",
        "arm_index,kind,n_samples,mean",
    ]
    for a, arm in enumerate(instance.arms, start=1):
        n_samples = arm.n_samples if isinstance(arm, EmpiricalArm) else ""
        lines.append(f"{a},{arm.kind},{n_samples},{_fmt(arm.mean())}")
    return "\n".join(lines) + "\n"


class IngestService:
    """
    Turns cluster-trace and ratings tables into empirical instances.
    """

    def __init__(self, trace_repo: TraceRepository):
        """
        Initializes the IngestService.

        Args:
            trace_repo (TraceRepository): Reads the (id, value) table.
        """
        self.trace_repo = trace_repo

    def load_instance(self, spec: TraceSpec) -> tuple[EgalMabInstance, list[IdMapEntry]]:
        """
        Groups a trace's values by id and builds one empirical arm per kept id.

        Ids are kept either by entry count (descending, ties by first
        appearance) or, for `random:SEED`, as a seeded uniform draw listed in
        first-appearance order. Each arm's support is its id's values in file
        order, negated when `spec.negate` is set.

        Args:
            spec (TraceSpec): File, columns and selection settings.

        Returns:
            tuple[EgalMabInstance, list[IdMapEntry]]: The instance and the
                arm index to original id map.

        Raises:
            IngestError: If the file is malformed or has fewer than
                `spec.top_k` distinct ids.
        """
        frame = self.trace_repo.read(spec.path, spec.id_column, spec.value_column, spec.max_rows)
        if spec.negate:
            frame["value"] = 0.0 - frame["value"]

        groups = frame.groupby("id", sort=False)["value"]
        counts = groups.size()
        if len(counts) < spec.top_k:
            raise IngestError(
                f"{spec.path}: insufficient distinct ids: need {spec.top_k}, found {len(counts)}"
            )

        if spec.selection.name == "random":
            rng = np.random.default_rng(spec.selection.seed)
            picked = np.sort(rng.choice(len(counts), spec.top_k, replace=False))
            kept = counts.index[picked]
        else:
            kept = counts.sort_values(ascending=False, kind="stable").index[:spec.top_k]

        arms = []
        id_map = []
        for arm_index, original_id in enumerate(kept, start=1):
            arm = EmpiricalArm(tuple(groups.get_group(original_id).tolist()))
            arms.append(arm)
            id_map.append(IdMapEntry(arm_index, str(original_id), arm.n_samples, arm.mean()))

        logger.info(
            "[IngestService] Kept %d of %d ids (%s) from %s", len(arms), len(counts), spec.selection, spec.path
        )
        return EgalMabInstance(tuple(arms)), id_map

    def summarize(self, instance: EgalMabInstance, U: int) -> str:
        """The `instance_summary` report of an ingested instance."""
        return instance_summary(instance, U)

