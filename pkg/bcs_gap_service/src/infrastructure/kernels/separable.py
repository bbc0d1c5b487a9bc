import numpy as np

from bcs_gap_service.src.domain.models.model import KernelKind
from bcs_gap_service.src.infrastructure.kernels.base import BasePotentialKernel


class SeparableKernel(BasePotentialKernel):
    """Rank-one kernel left(x) * right(xi) with piecewise linear factors."""

    def __init__(self, grid: list[float], left: list[float], right: list[float], lower: float, upper: float):
        super().__init__(lower, upper)
        self.grid = np.asarray(grid, dtype=float)
        self.left = np.asarray(left, dtype=float)
        self.right = np.asarray(right, dtype=float)

    @property
    def kind(self) -> KernelKind:
        return KernelKind.SEPARABLE

    def _evaluate(self, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        # np.interp holds the end values outside the sample grid
        return np.interp(x, self.grid, self.left) * np.interp(xi, self.grid, self.right)
