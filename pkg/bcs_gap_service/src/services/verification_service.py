import math
from collections.abc import Callable
from dataclasses import replace

import numpy as np

from bcs_gap_service.src.core.check_references import CHECK_REFERENCES, STAGE_REFERENCES
from bcs_gap_service.src.core.config import Settings
from bcs_gap_service.src.core.constants import CRITICAL_RHO_TOL
from bcs_gap_service.src.core.exceptions import GapSolverException, GridTooCoarse, RadicandNegative
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.interfaces.result_writer import IResultWriter
from bcs_gap_service.src.domain.models.gap import CriticalPoint
from bcs_gap_service.src.domain.models.model import ValidatedModel
from bcs_gap_service.src.domain.models.report import Check, CheckStatus, VerifyReport
from bcs_gap_service.src.domain.models.thermo import HeatJump
from bcs_gap_service.src.domain.schemas.config import ConstantKernelConfig, ModelConfig, RunConfig, WindowConfig
from bcs_gap_service.src.domain.schemas.results import CheckSchema, VerifyReportDocument
from bcs_gap_service.src.infrastructure.quadrature.gauss_legendre import build_interval_rule
from bcs_gap_service.src.infrastructure.quadrature.special import heat_jump_weight, sech_squared, tanh_over
from bcs_gap_service.src.services.pipeline_service import (
    PSI_AT_CRITICAL_TOLERANCE,
    TRIANGLE_TOLERANCE,
    PipelineService,
    ThermoOutcome,
)

# Weak-coupling reference values of the constant-coupling theory
WEAK_COUPLING_SLOPE = 8.0 * math.pi**2 / (7.0 * 1.2020569031595942)
WEAK_COUPLING_JUMP = 12.0 / (7.0 * 1.2020569031595942)
WEAK_COUPLING_MODEL = ModelConfig(epsilon=5e-4, hbar_omega_d=1.0, n0=1.0, u1=0.2, u2=0.225)
WEAK_COUPLING_KERNEL = ConstantKernelConfig(value=0.2125)

REFINED_TRIANGLE_TOLERANCE = 0.005
CLOSED_FORM_COUPLINGS = np.linspace(0.22, 0.4, 5)
CLOSED_FORM_PANELS = 256
CUTOFF_DECADES = 3
GAP_ORDER_MARGIN = 1e-10


def _reference(check_id: str) -> str:
    if check_id in CHECK_REFERENCES:
        return CHECK_REFERENCES[check_id]
    return STAGE_REFERENCES[check_id.rsplit(".", 1)[-1]]


class VerificationService:
    """Runs every invariant of the solver stack as a named check and collects a VerifyReport."""

    def __init__(self, pipeline_service: PipelineService, settings: Settings, logger: Logger):
        self.pipeline = pipeline_service
        self.model_service = pipeline_service.model_service
        self.simple_gap_service = pipeline_service.simple_gap_service
        self.operator_service = pipeline_service.operator_service
        self.expansion_service = pipeline_service.expansion_service
        self.thermo_service = pipeline_service.thermo_service
        self.settings = settings
        self.logger = logger

    def run_verify(self, config: RunConfig, writer: IResultWriter) -> VerifyReport:
        report = VerifyReport()
        rng = np.random.default_rng(config.verify.seed)

        try:
            model = self.model_service.build(config)
        except GapSolverException as e:
            self._record(report, "model.validation", "kernel pinched strictly inside the coupling band", False,
                         detail=e.message)
            self._write(report, writer)
            return report
        self._record(report, "model.validation", "kernel pinched strictly inside the coupling band", True)

        self._stage(report, "model", lambda: self._model_checks(report, model))
        self._stage(report, "quadrature", lambda: self._quadrature_checks(report, model, rng))
        self._stage(report, "simple", lambda: self._simple_checks(report, model, config, rng))

        critical = self._stage(report, "critical", lambda: self.operator_service.critical_temperature(model))
        if critical is not None:
            self._stage(report, "operator", lambda: self._operator_checks(report, model, config, critical, rng))
            outcome = self._stage(report, "pipeline", lambda: self.pipeline.thermo(config, True, model, critical))
            if outcome is not None:
                self._stage(report, "window", lambda: self._window_checks(report, outcome, rng))
                self._stage(report, "surface", lambda: self._surface_checks(report, outcome, config))
                self._stage(report, "expansion", lambda: self._expansion_checks(report, outcome, config))
                self._stage(report, "thermo", lambda: self._thermo_checks(report, outcome, config))
        self._stage(report, "cutoff", lambda: self._cutoff_checks(report, model))
        self._stage(report, "weak_coupling", lambda: self._weak_coupling_checks(report, config))

        self._write(report, writer)
        self.logger.info(
            f"Verification finished: {report.overall.value}",
            extra={"checks": len(report.checks), "failed": [check.id for check in report.failed]}
        )
        return report

    def _write(self, report: VerifyReport, writer: IResultWriter) -> None:
        writer.write_json("verify_report.json", VerifyReportDocument(
            metadata=self.pipeline.metadata("verify"),
            overall=report.overall,
            checks=[CheckSchema.model_validate(check) for check in report.checks]
        ))

    def _stage(self, report: VerifyReport, stage: str, run: Callable):
        """Run one group of checks; a solver error becomes a failed check instead of aborting the suite."""
        try:
            return run()
        except GridTooCoarse as e:
            self._record(report, f"{stage}.grid_resolution", "temperature grid fine enough for the pipelines", False,
                         detail=e.message)
        except GapSolverException as e:
            self.logger.error(f"Verification stage {stage} failed: {e.message}", extra=e.context)
            self._record(report, f"{stage}.completed", f"{stage} stage runs to completion", False,
                         detail=f"{type(e).__name__}: {e.message}")
        return None

    @staticmethod
    def _record(
            report: VerifyReport,
            check_id: str,
            claim: str,
            passed: bool,
            measured: float | None = None,
            tolerance: float | None = None,
            detail: str = ""
    ) -> None:
        status = CheckStatus.PASS if passed else CheckStatus.FAIL
        report.add(Check(
            id=check_id,
            claim=claim,
            reference=_reference(check_id),
            status=status,
            measured=None if measured is None else float(measured),
            tolerance=tolerance,
            detail=detail
        ))

    @staticmethod
    def _info(report: VerifyReport, check_id: str, claim: str, measured: float | None = None, detail: str = "") -> None:
        report.add(Check(
            id=check_id,
            claim=claim,
            reference=_reference(check_id),
            status=CheckStatus.INFO,
            measured=None if measured is None else float(measured),
            detail=detail
        ))

    def _model_checks(self, report: VerifyReport, model: ValidatedModel) -> None:
        params = model.params
        margin = min(float(model.matrix.min()) - params.u1, params.u2 - float(model.matrix.max()))
        self._record(report, "model.kernel_pinched", "U1 < U(x, xi) < U2 at every node pair", margin > 0,
                     measured=margin, tolerance=0.0)

    def _quadrature_checks(self, report: VerifyReport, model: ValidatedModel, rng: np.random.Generator) -> None:
        params, rule = model.params, model.rule

        weight_error = abs(float(rule.weights.sum()) - params.width) / params.width
        self._record(report, "quadrature.weight_sum", "weights sum to hbar_omega_d - epsilon",
                     weight_error < 1e-12, measured=weight_error, tolerance=1e-12)

        exact = 0.5 * (params.hbar_omega_d**2 - params.epsilon**2)
        linear_error = abs(rule.integrate(rule.nodes) - exact) / exact
        self._record(report, "quadrature.polynomial_exactness", "linear integrand integrated exactly",
                     linear_error < 1e-12, measured=linear_error, tolerance=1e-12)

        pairs = np.sort(rng.uniform(0.0, 50.0, size=(1000, 2)), axis=1)
        pairs = pairs[pairs[:, 0] < pairs[:, 1]]
        monotone = bool(np.all(tanh_over(pairs[:, 0]) >= tanh_over(pairs[:, 1])))
        self._record(report, "quadrature.tanh_over_monotone", "tanh(z)/z is decreasing on z >= 0", monotone)

        z = rng.uniform(0.0, 50.0, size=1000)
        excess = float(np.max(z * sech_squared(z) - np.tanh(z)))
        self._record(report, "quadrature.sech_bound", "z sech^2 z <= tanh z for z >= 0", excess <= 1e-15,
                     measured=excess, tolerance=1e-15)

        eta = np.concatenate([[0.0], np.logspace(-6, math.log10(50.0), 400)])
        worst = float(np.max(heat_jump_weight(eta)))
        self._record(report, "quadrature.heat_weight_negative", "g(eta) < 0 on [0, 50]", worst < 0, measured=worst,
                     tolerance=0.0)

        origin = heat_jump_weight(0.0)
        slopes = [abs(heat_jump_weight(h) - origin) / h**2 for h in (1e-2, 1e-3)]
        self._record(report, "quadrature.heat_weight_flat_origin", "|g(h) - g(0)| / h <= C h near the origin",
                     max(slopes) <= 1.0, measured=max(slopes), tolerance=1.0)

        t = self.simple_gap_service.critical_temperature(params.u2, params, rule)
        reference_rule = build_interval_rule(params.epsilon, params.hbar_omega_d, 512, 8)

        def integrand(nodes: np.ndarray) -> np.ndarray:
            return np.tanh(nodes / (2.0 * t)) / nodes

        reference = reference_rule.integrate(integrand(reference_rule.nodes))
        errors = []
        for panels in (16, 32, 64):
            coarse = build_interval_rule(params.epsilon, params.hbar_omega_d, panels, 2)
            errors.append(abs(coarse.integrate(integrand(coarse.nodes)) - reference) / reference)
        ratios = [coarse / fine for coarse, fine in zip(errors, errors[1:], strict=False) if fine > 1e-13]
        self._record(report, "quadrature.panel_convergence", "halving the panel width cuts the error at least 4x",
                     all(ratio >= 4.0 for ratio in ratios), measured=min(ratios, default=float("inf")),
                     tolerance=4.0)

    def _simple_checks(
            self,
            report: VerifyReport,
            model: ValidatedModel,
            config: RunConfig,
            rng: np.random.Generator
    ) -> None:
        params, rule = model.params, model.rule
        simple = self.simple_gap_service
        tau_low = simple.critical_temperature(params.u1, params, rule)
        tau_high = simple.critical_temperature(params.u2, params, rule)
        self._record(report, "simple.tau_order", "tau_1 < tau_2", tau_low < tau_high, measured=tau_high - tau_low)

        temps = np.linspace(0.0, tau_high, config.verify.ordering_points)
        low = simple.gaps(params.u1, temps, params, rule, tau=tau_low)
        high = simple.gaps(params.u2, temps, params, rule, tau=tau_high)
        below = temps < tau_high
        margin = float(np.min(high[below] - low[below]))
        self._record(report, "simple.gap_order", "Delta_1(T) < Delta_2(T) for T < tau_2", margin > GAP_ORDER_MARGIN,
                     measured=margin, tolerance=GAP_ORDER_MARGIN)

        residuals = [
            abs(u * simple.coupling_integral(float(t), rule, float(gap)) - 1.0)
            for u, gaps in ((params.u1, low), (params.u2, high))
            for t, gap in zip(temps, gaps, strict=True) if gap > 0
        ]
        worst = max(residuals, default=0.0)
        self._record(report, "simple.root_residuals", "bisection roots satisfy the gap equation", worst < 1e-10,
                     measured=worst, tolerance=1e-10)

        fine_rule = build_interval_rule(params.epsilon, params.hbar_omega_d, CLOSED_FORM_PANELS, 8)
        deviations = []
        skipped = []
        for u in CLOSED_FORM_COUPLINGS:
            try:
                closed = simple.zero_temperature_gap(float(u), params)
            except RadicandNegative:
                skipped.append(f"{u:.3g}")
                continue
            deviations.append(abs(closed - simple.gap(float(u), 0.0, params, fine_rule)) / closed)
        worst = max(deviations, default=0.0)
        self._record(report, "simple.closed_form", "closed-form zero-temperature gap matches bisection",
                     bool(deviations) and worst < 1e-8, measured=worst, tolerance=1e-8,
                     detail=f"couplings without closed form: {', '.join(skipped)}" if skipped else "")

        scan_errors = []
        for _ in range(5):
            u = float(rng.uniform(params.u1, params.u2))
            tau = simple.critical_temperature(u, params, rule)
            t = float(rng.uniform(0.05, 0.9)) * tau
            scan_errors.append(abs(simple.gap(u, t, params, rule, tau=tau) - self._dense_scan(u, t, params, rule)))
        worst = max(scan_errors)
        self._record(report, "simple.oracle_scan", "bisection agrees with a dense sign-change scan", worst < 1e-6,
                     measured=worst, tolerance=1e-6)

        zero_gap = simple.gap(params.u2, 0.0, params, rule, tau=tau_high)
        flatness = max(
            abs(simple.gap(params.u2, h, params, rule, tau=tau_high) - zero_gap) / h**3
            for h in (tau_high / 100.0, tau_high / 1000.0)
        )
        bound = zero_gap / tau_high**3
        self._record(report, "simple.flat_origin", "gap is flat at T = 0", flatness <= bound, measured=flatness,
                     tolerance=bound)

        curve = simple.gap_curve(params.u2, config.temps.curve_points, params, rule)
        increments = np.diff(curve.deltas)
        self._record(report, "simple.curve_decreasing", "gap decreases in T and vanishes at tau",
                     bool(np.all(increments <= 1e-14 * curve.deltas[0])) and curve.deltas[-1] == 0,
                     measured=float(increments.max()))

        slopes = []
        for h in (1e-2 * tau_high, 1e-4 * tau_high):
            gap_h = simple.gap(params.u2, tau_high - h, params, rule, tau=tau_high)
            gap_2h = simple.gap(params.u2, tau_high - 2.0 * h, params, rule, tau=tau_high)
            slopes.append((gap_2h - gap_h) / h)
        blowup = slopes[1] / slopes[0]
        self._record(report, "simple.slope_blowup", "dDelta/dT diverges at tau like (tau - T)^(-1/2)",
                     blowup >= 9.0, measured=blowup, tolerance=9.0)

    def _dense_scan(self, u: float, t: float, params, rule) -> float:
        """Four-level sign-change scan of the simple gap equation."""
        def residual(gaps: np.ndarray) -> np.ndarray:
            return np.array([u * self.simple_gap_service.coupling_integral(t, rule, float(g)) - 1.0 for g in gaps])

        low, high = 0.0, params.hbar_omega_d
        for _ in range(4):
            grid = np.linspace(low, high, 201)
            values = residual(grid)
            crossing = int(np.flatnonzero(values <= 0)[0])
            low, high = float(grid[max(crossing - 1, 0)]), float(grid[crossing])
        return 0.5 * (low + high)

    def _operator_checks(
            self,
            report: VerifyReport,
            model: ValidatedModel,
            config: RunConfig,
            critical: CriticalPoint,
            rng: np.random.Generator
    ) -> None:
        params, rule = model.params, model.rule
        operator = self.operator_service
        simple = self.simple_gap_service
        t_c = critical.t_c
        tolerances = config.tolerances
        tau_low = simple.critical_temperature(params.u1, params, rule)
        tau_high = simple.critical_temperature(params.u2, params, rule)

        self._record(report, "operator.critical_bracket", "tau_1 < T_c < tau_2", tau_low < t_c < tau_high,
                     measured=t_c)
        rho_error = abs(critical.spectral_radius - 1.0)
        self._record(report, "operator.critical_rho", "spectral radius at T_c equals 1",
                     rho_error < CRITICAL_RHO_TOL, measured=rho_error, tolerance=CRITICAL_RHO_TOL)

        scan = t_c * np.linspace(0.9, 1.1, 10)
        signs = [np.sign(operator.spectral_radius(float(t), model)[0] - 1.0) == np.sign(t_c - t) for t in scan]
        self._record(report, "operator.spectral_bracket", "rho(T) - 1 changes sign exactly at T_c", all(signs),
                     measured=float(sum(signs)), tolerance=float(len(signs)))

        zero_image = float(np.max(np.abs(operator.apply(np.zeros(rule.size), t_c, model))))
        self._record(report, "operator.zero_row", "A maps the zero row to zero", zero_image == 0,
                     measured=zero_image)

        window = config.window
        tau = window.fallback_ratio * t_c
        grid = operator.window_grid(tau, t_c, window.grid)
        envelopes = [simple.gap(params.u2, float(t), params, rule, tau=tau_high) for t in grid]
        excess = max(
            float(np.max(operator.apply(np.full(rule.size, gap), float(t), model) - gap))
            for t, gap in zip(grid, envelopes, strict=True)
        )
        self._record(report, "operator.envelope", "A(Delta_2 1) <= Delta_2 on the window", excess <= 1e-14,
                     measured=excess, tolerance=1e-14)

        row = rng.uniform(0.0, envelopes[0], size=rule.size)
        growth = max(
            float(np.max(operator.apply(row, float(hot), model) - operator.apply(row, float(cold), model)))
            for cold, hot in zip(grid, grid[1:], strict=False)
        )
        self._record(report, "operator.temperature_monotone", "A u is nonincreasing in T", growth <= 1e-15,
                     measured=growth, tolerance=1e-15)

        alpha = operator.alpha_bound(tau, grid, model, t_c=t_c)
        worst = -np.inf
        for _ in range(config.verify.lipschitz_pairs):
            t = float(rng.choice(grid))
            low = simple.gap(params.u1, t, params, rule, tau=tau_low)
            high = simple.gap(params.u2, t, params, rule, tau=tau_high)
            first, second = rng.uniform(low, high, size=(2, rule.size))
            distance = float(np.max(np.abs(first - second)))
            image = float(np.max(np.abs(operator.apply(first, t, model) - operator.apply(second, t, model))))
            worst = max(worst, image - alpha * distance)
        self._record(report, "operator.lipschitz_bound", "|Au - Av| <= alpha |u - v| on the box", worst <= 1e-12,
                     measured=worst, tolerance=1e-12)

        perron, _, _ = operator.spectral_radius(tau, model)
        self._record(report, "operator.alpha_dominates_perron", "alpha is at least the linearized spectral radius",
                     alpha >= perron * (1.0 - 1e-12), measured=alpha - perron, tolerance=0.0,
                     detail=f"alpha={alpha!r}, rho={perron!r}")

        rank_one = self._rank_one_model(model)
        rank_one_critical = operator.critical_temperature(rank_one)
        rank_one_tau = simple.critical_temperature(rank_one.matrix[0, 0], params, rule)
        drift = abs(rank_one_critical.t_c - rank_one_tau) / rank_one_tau
        self._record(report, "operator.critical_rank_one", "constant kernel: T_c equals the simple tau",
                     drift < 1e-8, measured=drift, tolerance=1e-8)

        coupling = float(rank_one.matrix[0, 0])
        gaps_error = 0.0
        for t in rank_one_tau * np.linspace(0.1, 0.95, 10):
            row, _ = operator.picard_solve(float(t), rank_one, tolerances.picard_tol, tolerances.max_iter)
            expected = simple.gap(coupling, float(t), params, rule, tau=rank_one_tau)
            gaps_error = max(gaps_error, float(np.max(np.abs(row - expected))))
        self._record(report, "operator.constant_kernel_fixed_point", "constant kernel: fixed point is the simple gap",
                     gaps_error < 1e-7, measured=gaps_error, tolerance=1e-7)

        above, _ = operator.picard_solve(1.001 * t_c, model, tolerances.picard_tol, tolerances.max_iter)
        above_norm = float(np.max(np.abs(above)))
        self._record(report, "operator.solver_bracket_above", "Picard iteration collapses to zero just above T_c",
                     above_norm < 10.0 * tolerances.picard_tol, measured=above_norm,
                     tolerance=10.0 * tolerances.picard_tol)

        below, _ = operator.picard_solve(0.98 * t_c, model, tolerances.picard_tol, tolerances.max_iter, t_c=t_c)
        self._record(report, "operator.solver_bracket_below", "Picard iteration stays positive just below T_c",
                     float(below.min()) > 0, measured=float(below.min()), tolerance=0.0)

    def _rank_one_model(self, model: ValidatedModel) -> ValidatedModel:
        params = model.params
        kernel_config = ConstantKernelConfig(value=0.5 * (params.u1 + params.u2))
        kernel = self.model_service.kernel_factory.create(kernel_config, params)
        return self.model_service.validate(params, kernel, model.rule)

    def _window_checks(self, report: VerifyReport, outcome: ThermoOutcome, rng: np.random.Generator) -> None:
        window = outcome.solve.window
        if window.certified:
            self._record(report, "window.certified", "contraction constant below alpha_max", True,
                         measured=window.alpha, tolerance=window.alpha_max)
        else:
            self._info(report, "window.certified", "contraction constant below alpha_max", measured=window.alpha,
                       detail=f"no certified window; solved on uncertified tau={window.tau!r}")

        reports = outcome.solve.surface.reports
        ratio = max(r.empirical_ratio for r in reports if r.temperature < outcome.solve.critical.t_c)
        if window.certified:
            self._record(report, "operator.empirical_ratio", "observed step ratios stay below alpha",
                         ratio <= window.alpha + 0.01, measured=ratio, tolerance=window.alpha + 0.01)
        else:
            self._info(report, "operator.empirical_ratio", "largest observed step ratio below T_c", measured=ratio)

        self._record(report, "operator.monotone_iterates", "iterates from Delta_2 decrease monotonically",
                     all(r.monotone for r in reports))

        model, surface = outcome.solve.model, outcome.solve.surface
        worst = -np.inf
        for t, row, solve_report in zip(surface.temps, surface.values, reports, strict=True):
            residual = float(np.max(np.abs(self.operator_service.apply(row, float(t), model) - row)))
            if not math.isfinite(solve_report.fixed_point_error_bound):
                worst = float("inf")
                break
            worst = max(worst, residual - solve_report.fixed_point_error_bound - solve_report.tolerance)
        self._record(report, "operator.fixed_point_residual", "|Au - u| within the reported error bound",
                     worst <= 0, measured=worst, tolerance=0.0)

    def _surface_checks(self, report: VerifyReport, outcome: ThermoOutcome, config: RunConfig) -> None:
        checks = outcome.solve.surface.checks
        self._record(report, "surface.sandwich", "Delta_1(T) <= u(T, x) <= Delta_2(T)", checks.sandwich_ok,
                     measured=checks.sandwich_violation, tolerance=0.0)
        self._record(report, "surface.temperature_monotone", "u(T, x) is nonincreasing in T", checks.monotone_ok,
                     measured=checks.monotone_violation, tolerance=0.0)
        self._record(report, "surface.critical_row_zero", "u(T_c, x) = 0", checks.critical_row_ok,
                     measured=checks.critical_row_norm, tolerance=10.0 * config.tolerances.picard_tol)

    def _expansion_checks(self, report: VerifyReport, outcome: ThermoOutcome, config: RunConfig) -> None:
        solve = outcome.solve
        expansion, data = solve.expansion, solve.critical_data
        t_c = solve.critical.t_c
        tolerances = config.tolerances

        v_min = float(expansion.v.min())
        self._record(report, "expansion.v_positive", "v(x) > 0 at every node", v_min > 0, measured=v_min,
                     tolerance=0.0)

        half = self.expansion_service.extract(solve.surface, t_c, tolerances.n_fit, 0.5 * tolerances.fit_window)
        drift = float(np.max(np.abs(half.v - expansion.v) / np.abs(expansion.v)))
        self._record(report, "expansion.half_window_stability", "v stable when the fit window is halved",
                     drift < 0.01, measured=drift, tolerance=0.01)

        slope = float(np.max(data.slope_residuals))
        self._record(report, "expansion.slope_consistency", "v reproduces itself through F", slope < 1e-2,
                     measured=slope, tolerance=1e-2)
        self._info(report, "expansion.curvature_consistency", "w against G, second-order fit quantity",
                   measured=float(np.max(data.curvature_residuals)))

        if v_min > 0:
            shape = np.sqrt(expansion.v) / np.sqrt(expansion.v).max()
            mismatch = float(np.max(np.abs(shape - solve.critical.eigenfunction)))
            self._record(report, "expansion.eigenfunction_shape", "sqrt(v) is proportional to the eigenfunction",
                         mismatch < 1e-2, measured=mismatch, tolerance=1e-2)

    def _thermo_checks(self, report: VerifyReport, outcome: ThermoOutcome, config: RunConfig) -> None:
        solve, curve, jump = outcome.solve, outcome.curve, outcome.heat_jump
        model, surface = solve.model, solve.surface
        t_c = solve.critical.t_c
        thermo = self.thermo_service
        steps = self.pipeline.derivative_steps(t_c, config.tolerances)

        self._record(report, "thermo.psi_at_critical", "Psi(T_c) = 0", abs(jump.psi_at_critical) <
                     PSI_AT_CRITICAL_TOLERANCE, measured=jump.psi_at_critical, tolerance=PSI_AT_CRITICAL_TOLERANCE)

        coarse = abs(thermo.first_derivative_estimate(surface, model, t_c, max(steps)))
        fine = abs(thermo.first_derivative_estimate(surface, model, t_c, 0.5 * max(steps)))
        ratio = coarse / fine if fine > 0 else float("inf")
        self._record(report, "thermo.first_derivative_vanishes", "Psi'(T_c) -> 0 at second order",
                     ratio >= 3.5, measured=ratio, tolerance=3.5)

        self._record(report, "thermo.curvature_negative", "Psi''(T_c) < 0", jump.curvature_value < 0,
                     measured=jump.curvature_value, tolerance=0.0)
        forms = abs(jump.formula_value - jump.curvature_jump) / abs(jump.formula_value)
        self._record(report, "thermo.curvature_forms_agree", "eta-form and xi-form of Psi''(T_c) agree",
                     forms < 1e-8, measured=forms, tolerance=1e-8)
        self._record(report, "thermo.jump_positive", "heat jump > 0", jump.formula_value > 0,
                     measured=jump.formula_value, tolerance=0.0)
        self._record(report, "thermo.jump_triangle", "three heat-jump routes agree",
                     jump.relative_spread <= TRIANGLE_TOLERANCE, measured=jump.relative_spread,
                     tolerance=TRIANGLE_TOLERANCE)

        half = self.expansion_service.extract(
            surface, t_c, config.tolerances.n_fit, 0.5 * config.tolerances.fit_window
        )
        half_steps = (0.5 * steps[0], 0.5 * steps[1])
        refined = HeatJump.spread([
            thermo.heat_jump_formula(half.v, model, t_c),
            -t_c * thermo.curvature_at_critical(half.v, model, t_c),
            thermo.heat_jump_numeric(surface, model, t_c, half_steps)
        ])
        self._record(report, "thermo.jump_triangle_refined", "routes tighten under refinement",
                     refined <= REFINED_TRIANGLE_TOLERANCE, measured=refined, tolerance=REFINED_TRIANGLE_TOLERANCE)

        below = (curve.temps >= solve.window.tau) & (curve.temps < t_c)
        positive = int(np.count_nonzero(curve.psi[below] > 0))
        self._info(report, "thermo.psi_nonpositive", "Psi <= 0 on [tau, T_c]", measured=positive,
                   detail="count of rows with Psi > 0")
        entropy = int(np.count_nonzero(curve.entropy_diff[below] > 0))
        self._info(report, "thermo.entropy_sign", "entropy difference <= 0 on [tau, T_c)", measured=entropy,
                   detail="count of rows with positive entropy difference")
        upper = curve.psi[curve.temps >= 0.5 * (solve.window.tau + t_c)]
        self._info(report, "thermo.psi_monotone_upper", "Psi increases toward 0 on the upper half of the window",
                   measured=float(np.all(np.diff(upper) >= 0)))

        bound, psi_tau = float(curve.psi_error[0]), float(curve.psi[0])
        self._record(report, "thermo.error_bound_informative", "Psi error bound below |Psi(tau)|",
                     bound < abs(psi_tau), measured=bound, tolerance=abs(psi_tau))

        scaled = model.scaled_density(2.0)
        params = scaled.params
        zero_gap = self.simple_gap_service.gap(params.u2, 0.0, params, scaled.rule)
        pairs = [
            (thermo.potential_difference(float(surface.temps[0]), surface.values[0], scaled), 2.0 * psi_tau),
            (thermo.heat_jump_formula(solve.expansion.v, scaled, t_c), 2.0 * jump.formula_value),
            (thermo.potential_error_bound(1.0, solve.window.alpha, params, t_c, solve.window.tau, zero_gap),
             2.0 * thermo.potential_error_bound(1.0, solve.window.alpha, model.params, t_c, solve.window.tau,
                                                zero_gap))
        ]
        deviation = max(abs(got - want) / abs(want) for got, want in pairs)
        self._record(report, "thermo.homogeneity", "Psi, jump and error bound scale linearly with N_0",
                     deviation < 1e-12, measured=deviation, tolerance=1e-12)

    def _cutoff_checks(self, report: VerifyReport, model: ValidatedModel) -> None:
        """Constant kernel on a shrinking lower cutoff: the pairing part of dPsi/dT at T_c follows ln(1/epsilon)."""
        coupling = 0.5 * (model.params.u1 + model.params.u2)
        ladder = model.params.epsilon * 10.0 ** -np.arange(CUTOFF_DECADES)
        terms, deviations, curvatures = [], [], []
        for epsilon in ladder:
            epsilon = float(epsilon)
            params = replace(model.params, epsilon=epsilon)
            rule = build_interval_rule(epsilon, params.hbar_omega_d, math.ceil(params.width / epsilon), 8)
            tau = self.simple_gap_service.critical_temperature(coupling, params, rule)
            slope = np.full(rule.size, self.simple_gap_service.squared_gap_slope(tau, rule))
            term = self.thermo_service.cutoff_term(slope, params, rule)
            terms.append(term)
            deviations.append(abs(term / (params.n0 * slope[0] * math.log(params.hbar_omega_d / epsilon)) - 1.0))
            curvatures.append(self.thermo_service.band_curvature(slope, params, rule, tau))

        growing = bool(np.all(np.diff(terms) > 0))
        worst = max(deviations)
        self._record(report, "thermo.cutoff_divergence", "N_0 int v/xi grows like ln(1/epsilon) as epsilon shrinks",
                     growing and worst < 1e-6, measured=worst, tolerance=1e-6,
                     detail=", ".join(f"epsilon={e:g}: {t:.6g}" for e, t in zip(ladder, terms, strict=True)))
        highest = max(curvatures)
        self._record(report, "thermo.cutoff_curvature_finite", "Psi''(T_c) stays finite and negative as epsilon drops",
                     bool(np.all(np.isfinite(curvatures))) and highest < 0, measured=highest, tolerance=0.0)

    def _weak_coupling_checks(self, report: VerifyReport, config: RunConfig) -> None:
        weak_config = config.model_copy(update={
            "model": WEAK_COUPLING_MODEL,
            "kernel": WEAK_COUPLING_KERNEL,
            "window": WindowConfig(mode="auto", alpha_max=config.window.alpha_max,
                                   fallback_ratio=config.window.fallback_ratio)
        })
        outcome = self.pipeline.thermo(weak_config, uncertified=True)
        t_c = outcome.solve.critical.t_c
        n0 = WEAK_COUPLING_MODEL.n0

        slope = float(np.mean(outcome.solve.expansion.v)) / t_c
        deviation = abs(slope - WEAK_COUPLING_SLOPE) / WEAK_COUPLING_SLOPE
        self._record(report, "expansion.weak_coupling", "v/T_c near 8 pi^2 / (7 zeta(3)) at weak coupling",
                     deviation < 0.05, measured=slope, tolerance=0.05)

        ratio = outcome.heat_jump.formula_value / (2.0 * math.pi**2 / 3.0 * n0 * t_c)
        deviation = abs(ratio - WEAK_COUPLING_JUMP) / WEAK_COUPLING_JUMP
        self._record(report, "thermo.weak_coupling_jump", "jump ratio near 12 / (7 zeta(3)) at weak coupling",
                     deviation < 0.07, measured=ratio, tolerance=0.07)
