import numpy as np

from bcs_gap_service.src.domain.models.model import BlendProfile, KernelKind
from bcs_gap_service.src.infrastructure.kernels.base import BasePotentialKernel


class BlendKernel(BasePotentialKernel):
    """Smooth interpolation between two coupling levels.

    With s, t the normalized energies, U = low + (high - low) * p(s, t) where the
    profile p maps into [0, 1]:

    * gaussian: exp(-(s - t)^2 / (2 width^2)), peaked on the diagonal
    * cosine:   (1 + cos(pi (s - t))) / 2
    * linear:   (2 s + t) / 3, deliberately not symmetric in (x, xi)
    """

    def __init__(self, low: float, high: float, profile: BlendProfile, width: float, lower: float, upper: float):
        super().__init__(lower, upper)
        self.low = float(low)
        self.high = float(high)
        self.profile = BlendProfile(profile)
        self.width = float(width)

    @property
    def kind(self) -> KernelKind:
        return KernelKind.BLEND

    def _evaluate(self, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        s = self.normalized(x)
        t = self.normalized(xi)

        if self.profile == BlendProfile.GAUSSIAN:
            weight = np.exp(-((s - t) ** 2) / (2.0 * self.width**2))
        elif self.profile == BlendProfile.COSINE:
            weight = 0.5 * (1.0 + np.cos(np.pi * (s - t)))
        else:
            weight = (2.0 * s + t) / 3.0

        return self.low + (self.high - self.low) * weight
