from __future__ import annotations
import logging
from pathlib import Path
try:
    from typing import override
except ImportError:  # Python < 3.12
    from typing_extensions import override

import pandas as pd

from errors import IngestError
from repositories.base_repository import BaseRepository

logger = logging.getLogger(__name__)


class TraceRepository(BaseRepository):
    """
    Reads (id, value) tables out of cluster-trace or ratings CSVs.
    """

    @override
    def read(self, path: str | Path, id_column: str = "id", value_column: str = "value",
             max_rows: int | None = None) -> pd.DataFrame:
        """
        Reads the id and value columns of a CSV with a header row.

        Args:
            path (str | Path): The CSV to read.
            id_column (str): Header name of the id column; ids are kept as text.
            value_column (str): Header name of the numeric value column.
            max_rows (int | None): Read at most this many data rows.

        Returns:
            pd.DataFrame: Columns `id` (str) and `value` (float) in file order.

        Raises:
            FileNotFoundError: If the file does not exist.
            IngestError: If the file does not parse, a column is missing, or a
                row has an empty id or a non-numeric value. Rows are numbered
                from 1 after the header.
        """
        try:
            frame = self._read_csv(path, dtype=str, keep_default_na=False, nrows=max_rows, skipinitialspace=True)
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise IngestError(f"{path}: not a readable CSV with a header: {e}") from e

        for column in (id_column, value_column):
            if column not in frame.columns:
                raise IngestError(f"{path}: column '{column}' not in header {','.join(map(str, frame.columns))}")

        ids = frame[id_column].str.strip()
        raw = frame[value_column].str.strip()
        values = pd.to_numeric(raw, errors="coerce")

        empty_ids = ids == ""
        if empty_ids.any():
            row = int(empty_ids.to_numpy().argmax()) + 1
            raise IngestError(f"{path}: malformed row {row}: empty '{id_column}'")
        bad_values = values.isna()
        if bad_values.any():
            row = int(bad_values.to_numpy().argmax())
            raise IngestError(f"{path}: malformed row {row + 1}: non-numeric '{value_column}' value '{raw.iloc[row]}'")

        logger.info("[TraceRepository] %d rows, %d distinct ids in %s", len(frame), ids.nunique(), path)
        return pd.DataFrame({"id": ids.to_numpy(), "value": values.astype(float).to_numpy()})

    @override
    def write(self, path: str | Path, data: pd.DataFrame) -> Path:
        """Writes an (id, value) table, for building fixtures or trimmed traces."""
        return self._write_csv(path, data)
