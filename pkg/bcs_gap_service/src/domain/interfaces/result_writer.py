from abc import ABC, abstractmethod
from pathlib import Path

import numpy as np
from pydantic import BaseModel


class IResultWriter(ABC):
    @abstractmethod
    def write_json(self, name: str, document: BaseModel) -> Path | None:
        pass

    @abstractmethod
    def write_csv(self, name: str, header: list[str], columns: list[np.ndarray]) -> Path | None:
        pass
