from pathlib import Path

import numpy as np
from pydantic import BaseModel

from bcs_gap_service.src.core.constants import CSV_FLOAT_FORMAT
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.interfaces.result_writer import IResultWriter


class FileResultWriter(IResultWriter):
    """Writes JSON documents and CSV tables into one output directory."""

    def __init__(self, out_dir: str | Path, formats: list[str], logger: Logger):
        self.out_dir = Path(out_dir)
        self.formats = set(formats)
        self.logger = logger

    def _target(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / name

    def write_json(self, name: str, document: BaseModel) -> Path | None:
        if "json" not in self.formats:
            return None
        path = self._target(name)
        path.write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")
        self.logger.info(f"Wrote {path}", extra={"format": "json"})
        return path

    def write_csv(self, name: str, header: list[str], columns: list[np.ndarray]) -> Path | None:
        if "csv" not in self.formats:
            return None
        path = self._target(name)
        table = np.column_stack([np.asarray(column, dtype=float) for column in columns])
        np.savetxt(path, table, delimiter=",", header=",".join(header), comments="", fmt=CSV_FLOAT_FORMAT)
        self.logger.info(f"Wrote {path}", extra={"format": "csv", "rows": table.shape[0]})
        return path
