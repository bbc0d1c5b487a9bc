import numpy as np

from bcs_gap_service.src.domain.models.model import KernelKind
from bcs_gap_service.src.infrastructure.kernels.base import BasePotentialKernel


class ConstantKernel(BasePotentialKernel):
    def __init__(self, value: float, lower: float, upper: float):
        super().__init__(lower, upper)
        self.value = float(value)

    @property
    def kind(self) -> KernelKind:
        return KernelKind.CONSTANT

    def _evaluate(self, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        return np.full(np.shape(x), self.value)
