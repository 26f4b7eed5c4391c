from __future__ import annotations
import logging
from abc import ABC, abstractmethod
from pathlib import Path

import pandas as pd

logger = logging.getLogger(__name__)


class BaseRepository(ABC):
    """Contract for every file-backed repository to follow"""

    @abstractmethod
    def read(self, path: str | Path): ...

    @abstractmethod
    def write(self, path: str | Path, data) -> Path: ...

    def _read_csv(self, path: str | Path, **kwargs) -> pd.DataFrame:
        """Generic CSV read that logs using the caller's class name.

        Args:
            path (str | Path): File to read.
            **kwargs: Passed through to `pandas.read_csv`.

        Returns:
            pd.DataFrame: The parsed table.

        Raises:
            FileNotFoundError: If the file does not exist.
        """
        caller_name = self.__class__.__name__
        path = Path(path)
        if not path.is_file():
            logger.error("[%s ERROR] No file found at %s", caller_name, path)
            raise FileNotFoundError(f"No such file: {path}")
        frame = pd.read_csv(path, **kwargs)
        logger.debug("[%s] Read %d rows from %s", caller_name, len(frame), path)
        return frame

    def _write_csv(self, path: str | Path, frame: pd.DataFrame, header_lines: list[str] | None = None) -> Path:
        """Generic CSV write with optional `#`-prefixed header lines.

        Floats are written with 17 significant digits, which round-trips
        every double and keeps output byte-identical across runs.

        Args:
            path (str | Path): Destination file; parent directories are created.
            frame (pd.DataFrame): Rows to write, without index.
            header_lines (list[str] | None): Lines emitted as `# line` first.

        Returns:
            Path: The written file.
        """
        caller_name = self.__class__.__name__
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            for line in header_lines or []:
                f.write(f"# {line}\n")
            frame.to_csv(f, index=False, float_format="%.17g", lineterminator="\n")
        logger.info("[%s] Wrote %d rows to %s", caller_name, len(frame), path)
        return path
