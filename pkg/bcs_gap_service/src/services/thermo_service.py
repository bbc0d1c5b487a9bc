import math

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import expit

from bcs_gap_service.src.core.constants import MIN_TEMPERATURE_COUNT
from bcs_gap_service.src.core.exceptions import GridTooCoarse, InvalidParameter
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.models.gap import GapSurface
from bcs_gap_service.src.domain.models.model import ModelParams, ValidatedModel
from bcs_gap_service.src.domain.models.quadrature import QuadratureRule
from bcs_gap_service.src.domain.models.thermo import HeatJump, ThermoCurve
from bcs_gap_service.src.infrastructure.quadrature.gauss_legendre import build_interval_rule
from bcs_gap_service.src.infrastructure.quadrature.special import heat_jump_weight, sech_squared
from bcs_gap_service.src.services.simple_gap_service import SimpleGapService

STENCIL_SIZE = 5


def finite_difference_weights(offsets: np.ndarray, order: int) -> np.ndarray:
    """Weights c_j with sum_j c_j f(x0 + d_j) ~ f^(order)(x0) for arbitrary distinct offsets d_j."""
    offsets = np.asarray(offsets, dtype=float)
    scale = float(np.max(np.abs(offsets)))
    scaled = offsets / scale
    powers = np.arange(offsets.size)
    factorials = np.array([math.factorial(k) for k in powers], dtype=float)
    vandermonde = scaled[None, :] ** powers[:, None] / factorials[:, None]
    target = np.zeros(offsets.size)
    target[order] = 1.0
    return np.linalg.solve(vandermonde, target) / scale**order


class ThermoService:
    """Potential difference between the superconducting and normal states and the heat jump at T_c."""

    def __init__(self, simple_gap_service: SimpleGapService, logger: Logger):
        self.simple_gap_service = simple_gap_service
        self.logger = logger

    def potential_difference(self, t: float, u_row: np.ndarray, model: ValidatedModel) -> float:
        """Psi(T) for the gap row ``u_row`` at temperature ``t``; exactly 0 when the row vanishes."""
        if not t > 0:
            raise InvalidParameter(f"Temperature must be positive, got {t}")

        params, rule = model.params, model.rule
        xi = rule.nodes
        u_row = np.asarray(u_row, dtype=float)
        squares = u_row**2
        energy = np.hypot(xi, u_row)
        excess = squares / (energy + xi)

        # log((1 + e^{-E/t}) / (1 + e^{-xi/t})) without forming either exponential
        log_ratio = np.log1p(expit(-xi / t) * np.expm1(-excess / t))

        condensation = -2.0 * rule.integrate(excess)
        pairing = rule.integrate(squares / energy * np.tanh(energy / (2.0 * t)))
        entropy = -4.0 * t * rule.integrate(log_ratio)
        return float(params.n0 * (condensation + pairing + entropy))

    def potential_error_bound(
            self,
            sup_error: float,
            alpha: float,
            params: ModelParams,
            t_c: float,
            tau: float,
            zero_gap: float
    ) -> float:
        """Bound on |Psi| error caused by a gap row that is off by ``sup_error`` in sup norm."""
        constant = 2.0 * params.n0 * zero_gap * (
            (1.0 + 2.0 * t_c / tau) * math.log(params.hbar_omega_d / params.epsilon) + alpha
        )
        return constant * sup_error

    def potential_curve(
            self,
            surface: GapSurface,
            model: ValidatedModel,
            t_c: float,
            tau: float,
            alpha: float
    ) -> ThermoCurve:
        """Psi on the surface grid with entropy and heat differences from five-point stencils."""
        temps = surface.temps
        if temps.size < MIN_TEMPERATURE_COUNT:
            raise GridTooCoarse(
                f"Need at least {MIN_TEMPERATURE_COUNT} temperatures, got {temps.size}", count=int(temps.size)
            )

        psi = np.array([
            self.potential_difference(float(t), row, model) for t, row in zip(temps, surface.values, strict=True)
        ])
        first = np.empty_like(psi)
        second = np.empty_like(psi)
        for index in range(temps.size):
            start = min(max(index - STENCIL_SIZE // 2, 0), temps.size - STENCIL_SIZE)
            window = slice(start, start + STENCIL_SIZE)
            offsets = temps[window] - temps[index]
            first[index] = finite_difference_weights(offsets, 1) @ psi[window]
            second[index] = finite_difference_weights(offsets, 2) @ psi[window]

        params, rule = model.params, model.rule
        zero_gap = self.simple_gap_service.gap(params.u2, 0.0, params, rule)
        psi_error = np.array([
            self.potential_error_bound(report.fixed_point_error_bound, alpha, params, t_c, tau, zero_gap)
            for report in surface.reports
        ])
        contracting = 0.0 < alpha < 1.0
        if not contracting:
            self.logger.warning(
                "Psi error bound needs a contraction constant in (0, 1); rows are not certified",
                extra={"alpha": alpha}
            )
        inside = (temps >= tau) & (temps <= t_c)
        if not np.all(inside):
            self.logger.warning(
                "Potential evaluated outside the window [tau, T_c]",
                extra={"rows": int(np.count_nonzero(~inside)), "tau": tau, "t_c": t_c}
            )

        return ThermoCurve(
            temps=temps,
            psi=psi,
            entropy_diff=-first,
            heat_diff=-temps * second,
            psi_error=psi_error,
            certified=inside & contracting
        )

    def heat_jump_formula(self, v: np.ndarray, model: ValidatedModel, t_c: float) -> float:
        """-(N_0 / 8 T_c) * integral of v(2 T_c eta)^2 g(eta) over [eps/2T_c, hbar_omega_d/2T_c]."""
        params, rule = model.params, model.rule
        eta_rule = build_interval_rule(
            params.epsilon / (2.0 * t_c),
            params.hbar_omega_d / (2.0 * t_c),
            rule.panels,
            rule.points_per_panel
        )
        interpolant = PchipInterpolator(rule.nodes, np.asarray(v, dtype=float), extrapolate=True)
        v_eta = interpolant(2.0 * t_c * eta_rule.nodes)
        integral = eta_rule.integrate(v_eta**2 * heat_jump_weight(eta_rule.nodes))
        return float(-params.n0 / (8.0 * t_c) * integral)

    def curvature_at_critical(self, v: np.ndarray, model: ValidatedModel, t_c: float) -> float:
        """Second temperature derivative of Psi at T_c, integrated on the energy nodes."""
        return self.band_curvature(v, model.params, model.rule, t_c)

    @staticmethod
    def band_curvature(v: np.ndarray, params: ModelParams, rule: QuadratureRule, t_c: float) -> float:
        xi = rule.nodes
        half = xi / (2.0 * t_c)
        bracket = sech_squared(half) / (2.0 * t_c) - np.tanh(half) / xi
        v = np.asarray(v, dtype=float)
        return float(0.5 * params.n0 * rule.integrate(v**2 / xi**2 * bracket))

    @staticmethod
    def cutoff_term(v: np.ndarray, params: ModelParams, rule: QuadratureRule) -> float:
        """N_0 * integral of v(xi) / xi over the band: the pairing part of dPsi/dT at T_c.

        Grows like ln(1 / epsilon) as the lower cutoff shrinks.
        """
        return float(params.n0 * rule.integrate(np.asarray(v, dtype=float) / rule.nodes))

    def _psi_below_critical(self, surface: GapSurface, model: ValidatedModel, t_c: float, h: float) -> float:
        t = t_c - h
        return self.potential_difference(t, surface.row_at(t), model)

    def first_derivative_estimate(self, surface: GapSurface, model: ValidatedModel, t_c: float, h: float) -> float:
        """Second-order one-sided difference at T_c using Psi(T_c) = 0."""
        psi_h = self._psi_below_critical(surface, model, t_c, h)
        psi_2h = self._psi_below_critical(surface, model, t_c, 2.0 * h)
        return (-4.0 * psi_h + psi_2h) / (2.0 * h)

    def second_derivative_estimate(
            self,
            surface: GapSurface,
            model: ValidatedModel,
            t_c: float,
            steps: tuple[float, float]
    ) -> float:
        """Richardson combination of 2 Psi(T_c - h) / h^2 over two step sizes."""
        first_step, second_step = steps
        if first_step == second_step:
            raise InvalidParameter("Step sizes must differ")

        def quotient(h: float) -> float:
            return 2.0 * self._psi_below_critical(surface, model, t_c, h) / h**2

        return (first_step * quotient(second_step) - second_step * quotient(first_step)) / (first_step - second_step)

    def heat_jump_numeric(
            self,
            surface: GapSurface,
            model: ValidatedModel,
            t_c: float,
            steps: tuple[float, float]
    ) -> float:
        return -t_c * self.second_derivative_estimate(surface, model, t_c, steps)

    def heat_jump(
            self,
            surface: GapSurface,
            v: np.ndarray,
            model: ValidatedModel,
            t_c: float,
            steps: tuple[float, float]
    ) -> HeatJump:
        """All three heat-jump routes plus the measured potential and its derivatives at T_c."""
        formula = self.heat_jump_formula(v, model, t_c)
        curvature = self.curvature_at_critical(v, model, t_c)
        second_derivative = self.second_derivative_estimate(surface, model, t_c, steps)
        numeric = -t_c * second_derivative
        first_derivative = self.first_derivative_estimate(surface, model, t_c, max(steps))

        psi_at_critical = self.potential_difference(t_c, surface.row_at(t_c), model)
        jump = HeatJump(
            t_c=t_c,
            formula_value=formula,
            numeric_value=numeric,
            curvature_value=curvature,
            relative_spread=HeatJump.spread([formula, -t_c * curvature, numeric]),
            psi_at_critical=psi_at_critical,
            first_derivative=first_derivative,
            second_derivative=second_derivative
        )
        self.logger.info(
            f"Heat jump {formula!r} (formula), {numeric!r} (numeric)",
            extra={"relative_spread": jump.relative_spread, "psi_at_critical": psi_at_critical}
        )
        return jump
