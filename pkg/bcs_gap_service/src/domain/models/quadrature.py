from dataclasses import dataclass, field

import numpy as np

from bcs_gap_service.src.core.exceptions import LengthMismatch


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Composite Gauss-Legendre rule on [lower, upper]."""

    lower: float
    upper: float
    panels: int
    points_per_panel: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, samples: np.ndarray) -> float | np.ndarray:
        """Weighted sum over the nodes; a 2-D input is integrated along its last axis."""
        samples = np.asarray(samples, dtype=float)
        if samples.ndim == 0 or samples.shape[-1] != self.size:
            raise LengthMismatch(f"Expected {self.size} samples, got shape {samples.shape}")
        return samples @ self.weights
