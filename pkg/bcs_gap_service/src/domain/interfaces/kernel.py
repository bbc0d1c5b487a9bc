from abc import ABC, abstractmethod

import numpy as np

from bcs_gap_service.src.domain.models.model import KernelKind


class IPotentialKernel(ABC):
    @property
    @abstractmethod
    def kind(self) -> KernelKind:
        pass

    @abstractmethod
    def evaluate(self, x: float | np.ndarray, xi: float | np.ndarray) -> float | np.ndarray:
        pass

    @abstractmethod
    def matrix(self, rows: np.ndarray, columns: np.ndarray) -> np.ndarray:
        pass
