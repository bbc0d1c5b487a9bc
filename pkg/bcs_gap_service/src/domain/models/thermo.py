from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class ThermoCurve:
    """Potential, entropy and heat differences on the solved temperature grid."""

    temps: np.ndarray
    psi: np.ndarray
    entropy_diff: np.ndarray
    heat_diff: np.ndarray
    psi_error: np.ndarray
    certified: np.ndarray


@dataclass(frozen=True)
class HeatJump:
    """Specific-heat jump at T_c from three independent routes."""

    t_c: float
    formula_value: float
    numeric_value: float
    curvature_value: float
    relative_spread: float
    psi_at_critical: float
    first_derivative: float
    second_derivative: float

    @property
    def curvature_jump(self) -> float:
        return -self.t_c * self.curvature_value

    @staticmethod
    def spread(values: list[float]) -> float:
        """Largest pairwise difference relative to the smaller magnitude."""
        spread = 0.0
        for i, first in enumerate(values):
            for second in values[i + 1:]:
                scale = min(abs(first), abs(second))
                spread = max(spread, abs(first - second) / scale if scale > 0 else float("inf"))
        return spread
