import numpy as np

from bcs_gap_service.src.core.constants import FIT_CONDITION_LIMIT, MIN_FIT_POINTS
from bcs_gap_service.src.core.exceptions import FitIllConditioned, InvalidParameter, MissingTemperatures
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.models.gap import CriticalExpansion, GapSurface
from bcs_gap_service.src.domain.models.model import ValidatedModel
from bcs_gap_service.src.infrastructure.quadrature.special import sech_squared


class ExpansionService:
    """Expansion u(T, x)^2 = v(x) s + w(x) s^2 / 2 in s = T_c - T and its self-consistency checks."""

    def __init__(self, logger: Logger):
        self.logger = logger

    def extract(self, surface: GapSurface, t_c: float, n_fit: int, window: float = 0.05) -> CriticalExpansion:
        """Least-squares fit through the origin over ``n_fit`` rows below T_c.

        ``window`` bounds the offsets s = T_c - T as a fraction of T_c; the rows
        used are those nearest to the evenly spaced offsets window * T_c * k / n_fit.
        """
        if n_fit < MIN_FIT_POINTS:
            raise InvalidParameter(f"n_fit must be >= {MIN_FIT_POINTS}, got {n_fit}")

        offsets = t_c - surface.temps
        eligible = np.flatnonzero((offsets > 0) & (offsets <= window * t_c * (1.0 + 1e-12)))
        if eligible.size < n_fit:
            raise MissingTemperatures(
                f"Need {n_fit} temperatures within {window} T_c below T_c, surface has {eligible.size}",
                required=n_fit,
                available=int(eligible.size)
            )

        chosen = []
        remaining = eligible
        for target in window * t_c * np.arange(1, n_fit + 1) / n_fit:
            position = int(np.argmin(np.abs(offsets[remaining] - target)))
            chosen.append(remaining[position])
            remaining = np.delete(remaining, position)
        chosen = np.sort(np.array(chosen))
        s = offsets[chosen]
        s_max = float(s.max())
        sigma = s / s_max

        design = np.column_stack([sigma, 0.5 * sigma**2])
        condition = float(np.linalg.cond(design.T @ design))
        if not condition <= FIT_CONDITION_LIMIT:
            raise FitIllConditioned(
                f"Normal matrix condition number {condition:.3g} exceeds {FIT_CONDITION_LIMIT:.0e}",
                condition_number=condition
            )

        squares = surface.values[chosen] ** 2
        coefficients, *_ = np.linalg.lstsq(design, squares, rcond=None)
        fitted = design @ coefficients
        residuals = np.sqrt(np.mean((fitted - squares) ** 2, axis=0))

        v = coefficients[0] / s_max
        w = coefficients[1] / s_max**2
        self.logger.debug(
            "Fitted critical expansion",
            extra={"n_fit": n_fit, "s_max": s_max, "condition_number": condition, "v_min": float(v.min())}
        )
        return CriticalExpansion(v=v, w=w, fit_residuals=residuals, offsets=s, condition_number=condition)

    @staticmethod
    def _outer_factor(v: np.ndarray, model: ValidatedModel, t_c: float) -> np.ndarray:
        xi = model.nodes
        return model.weighted_matrix @ (np.sqrt(v) * np.tanh(xi / (2.0 * t_c)) / xi)

    def slope_function(self, v: np.ndarray, model: ValidatedModel, t_c: float) -> np.ndarray:
        """F(x) = (integral U(x, xi) sqrt(v(xi)) tanh(xi/2T_c)/xi dxi)^2."""
        v = np.asarray(v, dtype=float)
        if np.any(v <= 0):
            raise InvalidParameter("v must be positive at every node")
        return self._outer_factor(v, model, t_c) ** 2

    def slope_residual(self, v: np.ndarray, model: ValidatedModel, t_c: float) -> np.ndarray:
        """|F - v| / v per node."""
        v = np.asarray(v, dtype=float)
        return np.abs(self.slope_function(v, model, t_c) - v) / v

    def curvature_function(self, v: np.ndarray, w: np.ndarray, model: ValidatedModel, t_c: float) -> np.ndarray:
        """G(x): outer factor times the integral of U(x, eta) against the second-order bracket."""
        v = np.asarray(v, dtype=float)
        w = np.asarray(w, dtype=float)
        if np.any(v <= 0):
            raise InvalidParameter("v must be positive at every node")

        eta = model.nodes
        root_v = np.sqrt(v)
        half = eta / (2.0 * t_c)
        bracket = (
            (w / (eta * root_v) - 2.0 * v**1.5 / eta**3) * np.tanh(half)
            + root_v * sech_squared(half) * (v / (eta**2 * t_c) + 2.0 / t_c**2)
        )
        return self._outer_factor(v, model, t_c) * (model.weighted_matrix @ bracket)

    def curvature_residual(self, v: np.ndarray, w: np.ndarray, model: ValidatedModel, t_c: float) -> np.ndarray:
        """|G - w| per node."""
        return np.abs(self.curvature_function(v, w, model, t_c) - np.asarray(w, dtype=float))
