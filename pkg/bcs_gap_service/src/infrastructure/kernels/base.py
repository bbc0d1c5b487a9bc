import numpy as np

from bcs_gap_service.src.core.exceptions import OutOfDomain
from bcs_gap_service.src.domain.interfaces.kernel import IPotentialKernel

# Slack for roundoff at the interval ends
_DOMAIN_RTOL = 1e-12


class BasePotentialKernel(IPotentialKernel):
    """Base class for kernels on [lower, upper]^2 with common functionality"""

    def __init__(self, lower: float, upper: float):
        self.lower = float(lower)
        self.upper = float(upper)
        self._slack = _DOMAIN_RTOL * max(abs(self.lower), abs(self.upper))

    def evaluate(self, x: float | np.ndarray, xi: float | np.ndarray) -> float | np.ndarray:
        """Template method: domain check, then the kind-specific formula"""
        x_arr = np.asarray(x, dtype=float)
        xi_arr = np.asarray(xi, dtype=float)
        self._check_domain(x_arr, "x")
        self._check_domain(xi_arr, "xi")

        values = self._evaluate(*np.broadcast_arrays(x_arr, xi_arr))
        if values.ndim == 0:
            return float(values)
        return values

    def matrix(self, rows: np.ndarray, columns: np.ndarray) -> np.ndarray:
        """U(rows_i, columns_j) as a dense matrix."""
        rows = np.asarray(rows, dtype=float)
        columns = np.asarray(columns, dtype=float)
        return np.asarray(self.evaluate(rows[:, None], columns[None, :]), dtype=float)

    def normalized(self, energy: np.ndarray) -> np.ndarray:
        """Map energies onto [0, 1]."""
        return np.clip((energy - self.lower) / (self.upper - self.lower), 0.0, 1.0)

    def _check_domain(self, values: np.ndarray, name: str) -> None:
        if values.size == 0:
            return
        low = float(values.min())
        high = float(values.max())
        finite = np.isfinite(low) and np.isfinite(high)
        if not finite or low < self.lower - self._slack or high > self.upper + self._slack:
            raise OutOfDomain(
                f"Kernel argument {name} outside [{self.lower}, {self.upper}]: range [{low}, {high}]",
                argument=name,
                low=low,
                high=high
            )

    def _evaluate(self, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        raise NotImplementedError
