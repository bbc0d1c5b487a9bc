from collections import deque

import numpy as np
from scipy.optimize import bisect

from bcs_gap_service.src.core.constants import (
    CRITICAL_RHO_TOL,
    MONOTONE_SLACK,
    NEAR_CRITICAL_RELAXATION_CAP,
    POWER_ITERATION_MAX,
    POWER_ITERATION_RTOL,
    RATIO_HISTORY,
    ROOT_MAXITER,
    ROOT_RTOL,
    ROOT_XTOL,
    WINDOW_LADDER_HIGH,
    WINDOW_LADDER_LOW,
)
from bcs_gap_service.src.core.exceptions import (
    InvalidParameter,
    NoCertifiedWindow,
    NoRoot,
    NotConverged,
    PowerIterationStalled,
)
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.models.gap import BoundKind, CriticalPoint, SolveReport, WindowCertificate
from bcs_gap_service.src.domain.models.model import ValidatedModel
from bcs_gap_service.src.services.simple_gap_service import SimpleGapService

# Relative slack when checking that a temperature grid lies inside the window
_WINDOW_RTOL = 1e-12


class GapOperatorService:
    """Nystrom form of the gap operator: iteration, contraction constant and transition temperature."""

    def __init__(self, simple_gap_service: SimpleGapService, logger: Logger):
        self.simple_gap_service = simple_gap_service
        self.logger = logger

    def apply(self, u_row: np.ndarray, t: float, model: ValidatedModel) -> np.ndarray:
        """(Au)(x_i) = sum_j w_j U(x_i, xi_j) u_j tanh(E_j/2t)/E_j with E_j = sqrt(xi_j^2 + u_j^2)."""
        u_row = np.asarray(u_row, dtype=float)
        energy = np.hypot(model.nodes, u_row)
        return model.weighted_matrix @ (u_row / energy * np.tanh(energy / (2.0 * t)))

    def linearized_matrix(self, t: float, model: ValidatedModel) -> np.ndarray:
        """Matrix of the operator linearized at u = 0."""
        xi = model.nodes
        return model.weighted_matrix * (np.tanh(xi / (2.0 * t)) / xi)[None, :]

    def spectral_radius(
            self,
            t: float,
            model: ValidatedModel,
            start: np.ndarray | None = None
    ) -> tuple[float, np.ndarray, int]:
        """Dominant eigenvalue of the linearized matrix by power iteration.

        The matrix is entrywise positive, so min and max of the componentwise
        ratios bracket the eigenvalue; iteration stops once the bracket is tight.
        Returns the eigenvalue, the sup-normalized eigenvector and the iteration count.
        """
        matrix = self.linearized_matrix(t, model)
        vector = np.ones(model.rule.size) if start is None else np.array(start, dtype=float)

        low = high = 0.0
        for iteration in range(1, POWER_ITERATION_MAX + 1):
            image = matrix @ vector
            ratios = image / vector
            low, high = float(ratios.min()), float(ratios.max())
            vector = image / image.max()
            if high - low <= POWER_ITERATION_RTOL * high:
                return 0.5 * (low + high), vector, iteration

        raise PowerIterationStalled(
            f"Power iteration at T={t!r} did not settle in {POWER_ITERATION_MAX} iterations: "
            f"bracket [{low!r}, {high!r}]",
            temperature=t,
            low=low,
            high=high
        )

    def critical_temperature(self, model: ValidatedModel) -> CriticalPoint:
        """Temperature where the linearized operator has spectral radius 1, bracketed by tau_1 and tau_2."""
        params, rule = model.params, model.rule
        tau_low = self.simple_gap_service.critical_temperature(params.u1, params, rule)
        tau_high = self.simple_gap_service.critical_temperature(params.u2, params, rule)

        warm_start = None

        def excess(t: float) -> float:
            nonlocal warm_start
            rho, warm_start, _ = self.spectral_radius(t, model, start=warm_start)
            return rho - 1.0

        low_excess, high_excess = excess(tau_low), excess(tau_high)
        if low_excess <= 0 or high_excess >= 0:
            raise NoRoot(
                f"Spectral radius does not cross 1 on [{tau_low!r}, {tau_high!r}]: "
                f"rho-1 = {low_excess:.3g}, {high_excess:.3g}",
                bracket=(tau_low, tau_high)
            )

        t_c = bisect(excess, tau_low, tau_high, xtol=ROOT_XTOL, rtol=ROOT_RTOL, maxiter=ROOT_MAXITER)
        rho, eigenfunction, iterations = self.spectral_radius(t_c, model, start=warm_start)
        if abs(rho - 1.0) >= CRITICAL_RHO_TOL:
            self.logger.warning(
                f"Spectral radius at T_c deviates from 1 by {abs(rho - 1.0):.3g}",
                extra={"t_c": t_c, "rho": rho}
            )

        self.logger.info(
            f"Transition temperature T_c = {t_c!r}",
            extra={"tau_1": tau_low, "tau_2": tau_high, "rho": rho, "power_iterations": iterations}
        )
        eigenfunction.setflags(write=False)
        return CriticalPoint(t_c=t_c, spectral_radius=rho, eigenfunction=eigenfunction, power_iterations=iterations)

    @staticmethod
    def window_grid(tau: float, t_c: float, count: int) -> np.ndarray:
        return np.linspace(tau, t_c, count)

    def alpha_bound(
            self,
            tau: float,
            t_grid: np.ndarray,
            model: ValidatedModel,
            strict: bool = True,
            t_c: float | None = None
    ) -> float:
        """Contraction constant: max over (T, x) of the two-term bound on the window [tau, T_c]."""
        t_grid = np.asarray(t_grid, dtype=float)
        if strict:
            if t_grid.min() < tau * (1.0 - _WINDOW_RTOL):
                raise InvalidParameter(f"Temperature grid starts below tau={tau!r}")
            if t_c is not None and t_grid.max() > t_c * (1.0 + _WINDOW_RTOL):
                raise InvalidParameter(f"Temperature grid extends above T_c={t_c!r}")

        params, rule = model.params, model.rule
        xi = rule.nodes
        tau_high = self.simple_gap_service.critical_temperature(params.u2, params, rule)
        gap_at_tau = self.simple_gap_service.gap(params.u2, tau, params, rule, tau=tau_high)
        scale = gap_at_tau**2 / (2.0 * params.epsilon**2)

        alpha = 0.0
        for t in t_grid:
            gap = self.simple_gap_service.gap(params.u2, float(t), params, rule, tau=tau_high)
            energy = np.hypot(xi, gap)
            first = model.weighted_matrix @ (np.tanh(energy / (2.0 * t)) / energy)
            second = model.weighted_matrix @ (np.tanh(xi / (2.0 * t)) / xi)
            alpha = max(alpha, float(np.max(first + scale * second)))
        return alpha

    def certify_window(
            self,
            tau: float,
            model: ValidatedModel,
            t_c: float,
            alpha_max: float,
            grid: int
    ) -> WindowCertificate:
        """Contraction constant of an explicitly chosen window start."""
        if not 0 < tau < t_c:
            raise InvalidParameter(f"Window start tau={tau!r} must lie in (0, T_c={t_c!r})")
        alpha = self.alpha_bound(tau, self.window_grid(tau, t_c, grid), model, t_c=t_c)
        return WindowCertificate(tau=tau, alpha=alpha, alpha_max=alpha_max, certified=alpha <= alpha_max)

    def auto_window(
            self,
            model: ValidatedModel,
            t_c: float,
            alpha_max: float,
            ladder: int = 48,
            grid: int = 9
    ) -> WindowCertificate:
        """Smallest ladder value of tau whose contraction constant does not exceed ``alpha_max``."""
        if not 0 < alpha_max < 1:
            raise InvalidParameter(f"alpha_max must lie in (0, 1), got {alpha_max}")

        candidates = t_c * np.linspace(WINDOW_LADDER_LOW, WINDOW_LADDER_HIGH, ladder)
        alphas: dict[int, float] = {}

        def alpha_at(index: int) -> float:
            if index not in alphas:
                tau = float(candidates[index])
                alphas[index] = self.alpha_bound(tau, self.window_grid(tau, t_c, grid), model, t_c=t_c)
            return alphas[index]

        last = ladder - 1
        if alpha_at(last) > alpha_max:
            best = min(alphas.values())
            raise NoCertifiedWindow(
                f"Contraction constant stays above {alpha_max} up to tau = T_c(1 - 1e-4); best alpha {best!r}. "
                "Reduce Delta_2(tau)/epsilon, e.g. by increasing epsilon or narrowing the coupling band",
                best_alpha=best,
                tau=float(candidates[last])
            )

        low, high = -1, last
        while high - low > 1:
            middle = (low + high) // 2
            if alpha_at(middle) <= alpha_max:
                high = middle
            else:
                low = middle

        tau = float(candidates[high])
        self.logger.info(
            f"Certified window starts at tau = {tau!r}",
            extra={"alpha": alphas[high], "alpha_max": alpha_max}
        )
        return WindowCertificate(tau=tau, alpha=alphas[high], alpha_max=alpha_max, certified=True)

    def picard_solve(
            self,
            t: float,
            model: ValidatedModel,
            tol: float,
            max_iter: int,
            init: np.ndarray | None = None,
            alpha: float | None = None,
            t_c: float | None = None,
            certified: bool = False
    ) -> tuple[np.ndarray, SolveReport]:
        """Iterate u <- Au from ``init`` (default Delta_2(t) on every node).

        The iteration stops once the a-posteriori error q*step/(1-q) drops below
        the tolerance, q being the largest of the recent step ratios. Below T_c
        the tolerance is relaxed by T_c/(T_c - t), capped at 100.
        """
        if not t > 0:
            raise InvalidParameter(f"Temperature must be positive, got {t}")

        params, rule = model.params, model.rule
        if init is None:
            init = np.full(rule.size, self.simple_gap_service.gap(params.u2, t, params, rule))
        u_row = np.array(init, dtype=float)

        tolerance = tol
        if t_c is not None and t < t_c:
            tolerance = tol * min(t_c / (t_c - t), NEAR_CRITICAL_RELAXATION_CAP)

        ratios: deque[float] = deque(maxlen=RATIO_HISTORY)
        empirical_ratio = 0.0
        monotone = True
        previous_step = None
        step = float("inf")

        for iteration in range(1, max_iter + 1):
            updated = self.apply(u_row, t, model)
            step = float(np.max(np.abs(updated - u_row)))
            if np.any(updated > u_row + MONOTONE_SLACK * max(1.0, float(u_row.max()))):
                monotone = False

            if previous_step:
                ratio = step / previous_step
                ratios.append(ratio)
                empirical_ratio = max(empirical_ratio, ratio)

            u_row = updated
            previous_step = step
            contraction = max(ratios) if ratios else 1.0

            if step == 0 or (contraction < 1 and step <= tolerance * (1.0 - contraction)):
                report = self._report(
                    t, iteration, step, empirical_ratio, contraction, tolerance, tolerance != tol, monotone,
                    alpha, certified
                )
                self.logger.debug(
                    f"Picard converged at T={t!r}",
                    extra={"iterations": iteration, "residual": step, "ratio": contraction}
                )
                return u_row, report

        trend = "diverging" if ratios and min(ratios) > 1 else "slow"
        raise NotConverged(
            f"Picard iteration at T={t!r} did not converge in {max_iter} iterations "
            f"(last step {step:.3g}, {trend})",
            temperature=t,
            iterations=max_iter,
            residual=step,
            trend=trend
        )

    @staticmethod
    def _report(
            t: float,
            iterations: int,
            step: float,
            empirical_ratio: float,
            contraction: float,
            tolerance: float,
            relaxed: bool,
            monotone: bool,
            alpha: float | None,
            certified: bool
    ) -> SolveReport:
        if step == 0:
            bound, kind = 0.0, BoundKind.CERTIFIED if certified else BoundKind.EMPIRICAL
        elif certified and alpha is not None and alpha < 1:
            bound, kind = alpha * step / (1.0 - alpha), BoundKind.CERTIFIED
        elif contraction < 1:
            bound, kind = contraction * step / (1.0 - contraction), BoundKind.EMPIRICAL
        else:
            bound, kind = float("inf"), BoundKind.NONE

        return SolveReport(
            temperature=t,
            iterations=iterations,
            final_residual=step,
            empirical_ratio=empirical_ratio,
            contraction_ratio=contraction,
            tolerance=tolerance,
            relaxed=relaxed,
            monotone=monotone,
            certified=certified,
            fixed_point_error_bound=bound,
            bound_kind=kind
        )
