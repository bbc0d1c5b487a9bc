import math

import numpy as np
from scipy.optimize import bisect

from bcs_gap_service.src.core.constants import (
    GAP_BRACKET_FACTOR,
    ROOT_MAXITER,
    ROOT_RTOL,
    ROOT_XTOL,
    TAU_BRACKET_FLOOR,
)
from bcs_gap_service.src.core.exceptions import InvalidParameter, NoRoot, RadicandNegative
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.models.gap import GapCurve
from bcs_gap_service.src.domain.models.model import ModelParams
from bcs_gap_service.src.domain.models.quadrature import QuadratureRule
from bcs_gap_service.src.infrastructure.quadrature.special import sech_squared


class SimpleGapService:
    """Constant-coupling gap equation: gap values, their vanishing temperature and closed form at T = 0."""

    def __init__(self, logger: Logger):
        self.logger = logger

    @staticmethod
    def coupling_integral(t: float, rule: QuadratureRule, gap: float = 0.0) -> float:
        """Integral of tanh(E/2t)/E with E = sqrt(xi^2 + gap^2); tanh is 1 at t = 0."""
        energy = np.hypot(rule.nodes, gap)
        if t == 0:
            return float(rule.integrate(1.0 / energy))
        return float(rule.integrate(np.tanh(energy / (2.0 * t)) / energy))

    def critical_temperature(self, u: float, params: ModelParams, rule: QuadratureRule) -> float:
        """tau with u * integral tanh(xi/2tau)/xi = 1."""
        if not u > 0:
            raise InvalidParameter(f"Coupling must be positive, got {u}")

        def residual(tau: float) -> float:
            return u * self.coupling_integral(tau, rule) - 1.0

        floor = TAU_BRACKET_FLOOR * params.hbar_omega_d
        ceiling = params.hbar_omega_d
        low_residual = residual(floor)
        high_residual = residual(ceiling)
        if low_residual < 0 or high_residual > 0:
            raise NoRoot(
                f"No vanishing temperature for coupling {u} in [{floor:.3g}, {ceiling:.3g}]: "
                f"residuals {low_residual:.3g}, {high_residual:.3g}",
                coupling=u,
                bracket=(floor, ceiling)
            )

        tau = bisect(residual, floor, ceiling, xtol=ROOT_XTOL, rtol=ROOT_RTOL, maxiter=ROOT_MAXITER)
        self.logger.debug(
            f"Vanishing temperature for coupling {u}: {tau!r}",
            extra={"coupling": u, "residual": residual(tau)}
        )
        return tau

    @staticmethod
    def squared_gap_slope(tau: float, rule: QuadratureRule) -> float:
        """v = -d(Delta^2)/dT at tau, by implicit differentiation of the gap equation."""
        xi = rule.nodes
        half = xi / (2.0 * tau)
        temperature_derivative = rule.integrate(sech_squared(half)) / (2.0 * tau**2)
        gap_derivative = rule.integrate((np.tanh(half) / xi - sech_squared(half) / (2.0 * tau)) / (2.0 * xi**2))
        return float(temperature_derivative / gap_derivative)

    def zero_temperature_gap(self, u: float, params: ModelParams) -> float:
        """Closed-form gap at T = 0; requires hbar_omega_d > epsilon * exp(1/u)."""
        inverse = 1.0 / u
        upper_factor = params.hbar_omega_d - params.epsilon * math.exp(inverse)
        if upper_factor <= 0:
            raise RadicandNegative(
                f"hbar_omega_d - epsilon*exp(1/u) = {upper_factor:.6g} <= 0 for u={u}, epsilon={params.epsilon}",
                coupling=u,
                epsilon=params.epsilon
            )
        lower_factor = params.hbar_omega_d - params.epsilon * math.exp(-inverse)
        return math.sqrt(upper_factor * lower_factor) / math.sinh(inverse)

    def gap(self, u: float, t: float, params: ModelParams, rule: QuadratureRule, tau: float | None = None) -> float:
        """Gap value at temperature t, zero at and above the vanishing temperature."""
        if t < 0:
            raise InvalidParameter(f"Temperature must be nonnegative, got {t}")
        if tau is None:
            tau = self.critical_temperature(u, params, rule)
        if t >= tau:
            return 0.0

        def residual(gap: float) -> float:
            return u * self.coupling_integral(t, rule, gap) - 1.0

        try:
            upper = GAP_BRACKET_FACTOR * self.zero_temperature_gap(u, params)
        except RadicandNegative:
            upper = GAP_BRACKET_FACTOR * params.hbar_omega_d

        if residual(0.0) <= 0:
            # t is within root-finder resolution of tau
            return 0.0
        return bisect(residual, 0.0, upper, xtol=ROOT_XTOL, rtol=ROOT_RTOL, maxiter=ROOT_MAXITER)

    def gaps(self, u: float, temps: np.ndarray, params: ModelParams, rule: QuadratureRule,
             tau: float | None = None) -> np.ndarray:
        if tau is None:
            tau = self.critical_temperature(u, params, rule)
        return np.array([self.gap(u, float(t), params, rule, tau=tau) for t in np.asarray(temps, dtype=float)])

    def gap_curve(self, u: float, n_temps: int, params: ModelParams, rule: QuadratureRule) -> GapCurve:
        """Gap sampled on [0, tau], uniform in sqrt(tau - T)."""
        if n_temps < 3:
            raise InvalidParameter(f"n_temps must be >= 3, got {n_temps}")

        tau = self.critical_temperature(u, params, rule)
        distance = math.sqrt(tau) * (1.0 - np.linspace(0.0, 1.0, n_temps))
        temps = tau - distance**2
        temps[0] = 0.0
        temps[-1] = tau

        deltas = self.gaps(u, temps, params, rule, tau=tau)
        return GapCurve(coupling=u, tau=tau, temps=temps, deltas=deltas)
