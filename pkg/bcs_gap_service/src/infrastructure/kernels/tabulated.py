import numpy as np
from scipy.interpolate import RegularGridInterpolator

from bcs_gap_service.src.domain.models.model import KernelKind
from bcs_gap_service.src.infrastructure.kernels.base import BasePotentialKernel


class TabulatedKernel(BasePotentialKernel):
    """Bilinear interpolation of a table given on grid x grid.

    Queries are clamped to the table hull, so values never leave [min(table), max(table)].
    """

    def __init__(self, grid: list[float], table: list[list[float]], lower: float, upper: float):
        super().__init__(lower, upper)
        self.grid = np.asarray(grid, dtype=float)
        self.table = np.asarray(table, dtype=float)
        self._interpolator = RegularGridInterpolator((self.grid, self.grid), self.table, method="linear")

    @property
    def kind(self) -> KernelKind:
        return KernelKind.TABULATED

    def _evaluate(self, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        x = np.clip(x, self.grid[0], self.grid[-1])
        xi = np.clip(xi, self.grid[0], self.grid[-1])
        points = np.stack([x.ravel(), xi.ravel()], axis=-1)
        return self._interpolator(points).reshape(x.shape)
