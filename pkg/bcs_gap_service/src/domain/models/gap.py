from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from bcs_gap_service.src.core.exceptions import MissingTemperatures

# Relative tolerance used to match requested temperatures against a grid
TEMPERATURE_MATCH_RTOL = 1e-9


class BoundKind(str, Enum):
    """Origin of a fixed-point error bound."""

    CERTIFIED = "certified"
    EMPIRICAL = "empirical"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class GapCurve:
    """Solution of the constant-coupling gap equation on [0, tau]."""

    coupling: float
    tau: float
    temps: np.ndarray
    deltas: np.ndarray


@dataclass(frozen=True)
class SolveReport:
    """Convergence record of one Picard solve."""

    temperature: float
    iterations: int
    final_residual: float
    empirical_ratio: float
    contraction_ratio: float
    tolerance: float
    relaxed: bool
    monotone: bool
    certified: bool
    fixed_point_error_bound: float
    bound_kind: BoundKind


@dataclass(frozen=True)
class WindowCertificate:
    """Window start tau with its contraction constant."""

    tau: float
    alpha: float
    alpha_max: float
    certified: bool

    def covers(self, temperature: float, t_c: float) -> bool:
        return self.certified and self.tau <= temperature <= t_c


@dataclass(frozen=True, eq=False)
class CriticalPoint:
    """Transition temperature and the positive mode of the linearized operator."""

    t_c: float
    spectral_radius: float
    eigenfunction: np.ndarray
    power_iterations: int


@dataclass(frozen=True)
class SurfaceChecks:
    """Post-hoc invariants of a gap surface."""

    sandwich_ok: bool
    sandwich_violation: float
    monotone_ok: bool
    monotone_violation: float
    critical_row_ok: bool
    critical_row_norm: float


@dataclass(frozen=True, eq=False)
class GapSurface:
    """Gap values u(T_j, x_i); rows follow ``temps``, columns follow ``nodes``."""

    temps: np.ndarray
    nodes: np.ndarray
    values: np.ndarray
    reports: list[SolveReport]
    checks: SurfaceChecks | None = None

    def index_of(self, temperature: float) -> int:
        matches = np.flatnonzero(
            np.abs(self.temps - temperature) <= TEMPERATURE_MATCH_RTOL * max(abs(temperature), 1e-300)
        )
        if matches.size == 0:
            raise MissingTemperatures(f"Temperature {temperature!r} is not on the surface grid")
        return int(matches[0])

    def row_at(self, temperature: float) -> np.ndarray:
        return self.values[self.index_of(temperature)]


@dataclass(frozen=True, eq=False)
class CriticalExpansion:
    """Coefficients of u^2 = v*s + (w/2)*s^2 with s = T_c - T."""

    v: np.ndarray
    w: np.ndarray
    fit_residuals: np.ndarray
    offsets: np.ndarray
    condition_number: float


@dataclass(frozen=True, eq=False)
class CriticalData:
    """Everything known at the transition temperature."""

    t_c: float
    tau: float
    alpha: float
    certified: bool
    v: np.ndarray
    w: np.ndarray
    eigenfunction: np.ndarray
    slope_residuals: np.ndarray = field(default_factory=lambda: np.empty(0))
    curvature_residuals: np.ndarray = field(default_factory=lambda: np.empty(0))
