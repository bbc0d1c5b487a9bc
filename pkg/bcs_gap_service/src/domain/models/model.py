from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from bcs_gap_service.src.domain.interfaces.kernel import IPotentialKernel
    from bcs_gap_service.src.domain.models.quadrature import QuadratureRule


class KernelKind(str, Enum):
    """Supported potential kernel families."""

    CONSTANT = "constant"
    BLEND = "blend"
    SEPARABLE = "separable"
    TABULATED = "tabulated"


class BlendProfile(str, Enum):
    """Weight profiles of a blend kernel."""

    GAUSSIAN = "gaussian"
    COSINE = "cosine"
    LINEAR = "linear"


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters in units with k_B = 1."""

    epsilon: float
    hbar_omega_d: float
    n0: float
    u1: float
    u2: float

    @property
    def width(self) -> float:
        return self.hbar_omega_d - self.epsilon


@dataclass(frozen=True, eq=False)
class ValidatedModel:
    """Parameters, kernel and quadrature rule that passed validation.

    ``matrix`` holds U(x_i, xi_j) on the node grid; rows are the output energy,
    columns the integration energy.
    """

    params: ModelParams
    kernel: "IPotentialKernel"
    rule: "QuadratureRule"
    matrix: np.ndarray = field(repr=False)

    @cached_property
    def weighted_matrix(self) -> np.ndarray:
        weighted = self.matrix * self.rule.weights[None, :]
        weighted.setflags(write=False)
        return weighted

    @property
    def nodes(self) -> np.ndarray:
        return self.rule.nodes

    def scaled_density(self, factor: float) -> "ValidatedModel":
        """Same model with the density of states multiplied by ``factor``."""
        return replace(self, params=replace(self.params, n0=self.params.n0 * factor))
