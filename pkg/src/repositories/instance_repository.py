from __future__ import annotations
import logging
from pathlib import Path
try:
    from typing import override
except ImportError:  # Python < 3.12
    from typing_extensions import override

import pandas as pd

from errors import DomainError, IngestError
from models.arms import BernoulliArm, EmpiricalArm, GaussianArm
from models.instances import EgalMabInstance
from repositories.base_repository import BaseRepository

logger = logging.getLogger(__name__)

INSTANCE_COLUMNS = ["arm_id", "kind", "p1", "p2"]


class InstanceRepository(BaseRepository):
    """
    Reads and writes instance files with header `arm_id,kind,p1,p2`.

    kind is one of gaussian (p1=mean, p2=std, default 1), bernoulli (p1=mean)
    or empirical-ref (p1=path of a one-column sample file, relative to the
    instance file).
    """

    @override
    def read(self, path: str | Path) -> EgalMabInstance:
        """
        Reads an instance file.

        Args:
            path (str | Path): The instance CSV.

        Returns:
            EgalMabInstance: Arms ordered by arm_id.

        Raises:
            IngestError: On a bad header, unknown kind, bad parameters or
                arm ids that are not exactly 1..K.
        """
        path = Path(path)
        frame = self._read_csv(path, dtype=str, keep_default_na=False, comment="#")
        if list(frame.columns) != INSTANCE_COLUMNS:
            raise IngestError(f"{path}: expected header {','.join(INSTANCE_COLUMNS)}, got {','.join(frame.columns)}")

        arms = {}
        for row_number, row in enumerate(frame.itertuples(index=False), start=1):
            try:
                arm_id = int(row.arm_id)
                arms[arm_id] = self._parse_arm(row.kind.strip(), row.p1.strip(), row.p2.strip(), path.parent)
            except (ValueError, DomainError) as e:
                raise IngestError(f"{path}: malformed row {row_number}: {e}") from e

        if sorted(arms) != list(range(1, len(arms) + 1)):
            raise IngestError(f"{path}: arm ids must be exactly 1..K, got {sorted(arms)}")
        return EgalMabInstance(tuple(arms[a] for a in range(1, len(arms) + 1)))

    def _parse_arm(self, kind: str, p1: str, p2: str, base_dir: Path):
        if kind == "gaussian":
            return GaussianArm(float(p1), float(p2) if p2 else 1.0)
        if kind == "bernoulli":
            return BernoulliArm(float(p1))
        if kind == "empirical-ref":
            return EmpiricalArm(tuple(self.read_samples(base_dir / p1)))
        raise ValueError(f"unknown kind '{kind}'")

    def read_samples(self, path: str | Path) -> list[float]:
        """Reads a one-column sample file; a non-numeric first line is taken as a header."""
        column = self._read_csv(path, header=None, dtype=str, comment="#").iloc[:, 0].str.strip()
        values = pd.to_numeric(column, errors="coerce")
        if len(values) and pd.isna(values.iloc[0]):
            values = values.iloc[1:]
        if values.isna().any():
            bad = int(values.index[values.isna()][0]) + 1
            raise ValueError(f"non-numeric sample on line {bad} of {path}")
        return values.astype(float).tolist()

    @override
    def write(self, path: str | Path, data: EgalMabInstance) -> Path:
        """
        Writes an instance file; empirical arms get a sample file
        `<stem>_arm<a>.csv` next to it.

        Returns:
            Path: The instance file.
        """
        path = Path(path)
        rows = []
        for a, arm in enumerate(data.arms, start=1):
            if isinstance(arm, GaussianArm):
                rows.append((a, "gaussian", repr(float(arm.mu)), repr(float(arm.std))))
            elif isinstance(arm, BernoulliArm):
                rows.append((a, "bernoulli", repr(float(arm.p)), ""))
            else:
                sample_path = path.with_name(f"{path.stem}_arm{a}.csv")
                self._write_csv(sample_path, pd.DataFrame({"value": list(arm.samples)}))
                rows.append((a, "empirical-ref", sample_path.name, ""))
        return self._write_csv(path, pd.DataFrame(rows, columns=INSTANCE_COLUMNS))
