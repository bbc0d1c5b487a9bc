import asyncio
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from bcs_gap_service.src.core.config import Settings
from bcs_gap_service.src.core.constants import MIN_TEMPERATURE_COUNT
from bcs_gap_service.src.core.exceptions import GridTooCoarse, InvalidParameter, NoCertifiedWindow, RadicandNegative
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.interfaces.result_writer import IResultWriter
from bcs_gap_service.src.domain.models.gap import (
    CriticalData,
    CriticalExpansion,
    CriticalPoint,
    GapCurve,
    GapSurface,
    WindowCertificate,
)
from bcs_gap_service.src.domain.models.model import ValidatedModel
from bcs_gap_service.src.domain.models.thermo import HeatJump, ThermoCurve
from bcs_gap_service.src.domain.schemas.config import RunConfig, TemperatureGridConfig, ToleranceConfig
from bcs_gap_service.src.domain.schemas.results import (
    CriticalDocument,
    HeatJumpDocument,
    Metadata,
    SimpleSummaryDocument,
    SolveReportSchema,
    SurfaceChecksSchema,
    SurfaceDocument,
)
from bcs_gap_service.src.services.expansion_service import ExpansionService
from bcs_gap_service.src.services.gap_operator_service import GapOperatorService
from bcs_gap_service.src.services.model_service import ModelService
from bcs_gap_service.src.services.simple_gap_service import SimpleGapService
from bcs_gap_service.src.services.surface_service import SurfaceService
from bcs_gap_service.src.services.thermo_service import ThermoService

# Grid points closer than this fraction of T_c are merged
_MERGE_RTOL = 1e-12

TRIANGLE_TOLERANCE = 0.02
PSI_AT_CRITICAL_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class SimpleOutcome:
    low: GapCurve
    high: GapCurve
    summary: SimpleSummaryDocument


@dataclass(frozen=True, eq=False)
class SolveOutcome:
    model: ValidatedModel
    critical: CriticalPoint
    window: WindowCertificate
    surface: GapSurface
    expansion: CriticalExpansion
    critical_data: CriticalData


@dataclass(frozen=True, eq=False)
class ThermoOutcome:
    solve: SolveOutcome
    curve: ThermoCurve
    heat_jump: HeatJump


class PipelineService:
    """End-to-end pipelines behind the command-line interface."""

    def __init__(
            self,
            model_service: ModelService,
            simple_gap_service: SimpleGapService,
            operator_service: GapOperatorService,
            surface_service: SurfaceService,
            expansion_service: ExpansionService,
            thermo_service: ThermoService,
            settings: Settings,
            logger: Logger
    ):
        self.model_service = model_service
        self.simple_gap_service = simple_gap_service
        self.operator_service = operator_service
        self.surface_service = surface_service
        self.expansion_service = expansion_service
        self.thermo_service = thermo_service
        self.settings = settings
        self.logger = logger

    def metadata(self, command: str) -> Metadata:
        return Metadata(app_name=self.settings.app_name, command=command, generated_at=datetime.now(timezone.utc))

    @staticmethod
    def derivative_steps(t_c: float, tolerances: ToleranceConfig) -> tuple[float, float]:
        return tolerances.h1 * t_c, tolerances.h2 * t_c

    @staticmethod
    def fit_offsets(t_c: float, window: float, n_fit: int) -> np.ndarray:
        return window * t_c * np.arange(1, n_fit + 1) / n_fit

    def temperature_grid(
            self,
            t_c: float,
            tau: float,
            temps: TemperatureGridConfig,
            tolerances: ToleranceConfig
    ) -> np.ndarray:
        """Clustered grid on [tau, T_c] plus the fit and derivative temperatures below T_c."""
        if temps.count < MIN_TEMPERATURE_COUNT:
            raise GridTooCoarse(
                f"Temperature grid has {temps.count} points, at least {MIN_TEMPERATURE_COUNT} are required",
                count=temps.count
            )

        fraction = 1.0 - np.linspace(0.0, 1.0, temps.count)
        base = t_c - (t_c - tau) * fraction**temps.cluster_exp

        steps = np.array(self.derivative_steps(t_c, tolerances))
        offsets = np.concatenate([
            self.fit_offsets(t_c, tolerances.fit_window, tolerances.n_fit),
            self.fit_offsets(t_c, 0.5 * tolerances.fit_window, tolerances.n_fit),
            steps,
            0.5 * steps,
            [2.0 * steps.max(), steps.max()]
        ])

        candidates = np.sort(np.concatenate([base, t_c - offsets, [t_c]]))
        grid = [candidates[0]]
        for t in candidates[1:]:
            if t - grid[-1] > _MERGE_RTOL * t_c:
                grid.append(t)
        grid = np.array(grid)
        grid[-1] = t_c
        return grid

    def resolve_window(
            self,
            model: ValidatedModel,
            config: RunConfig,
            t_c: float,
            uncertified: bool
    ) -> WindowCertificate:
        """Certified window if one exists; otherwise the configured fallback when ``uncertified`` is set."""
        window = config.window
        if window.mode == "explicit":
            certificate = self.operator_service.certify_window(window.tau, model, t_c, window.alpha_max, window.grid)
            if certificate.certified:
                return certificate
            if not uncertified:
                raise NoCertifiedWindow(
                    f"Contraction constant {certificate.alpha!r} at tau={window.tau!r} exceeds {window.alpha_max}",
                    best_alpha=certificate.alpha,
                    tau=window.tau
                )
            self.logger.warning(
                "Proceeding with an uncertified window",
                extra={"tau": window.tau, "alpha": certificate.alpha}
            )
            return certificate

        try:
            return self.operator_service.auto_window(model, t_c, window.alpha_max, window.ladder, window.grid)
        except NoCertifiedWindow as e:
            if not uncertified:
                raise
            tau = window.fallback_ratio * t_c
            alpha = self.operator_service.alpha_bound(
                tau, self.operator_service.window_grid(tau, t_c, window.grid), model, t_c=t_c
            )
            self.logger.warning(
                f"{e.message}; falling back to uncertified tau = {window.fallback_ratio} T_c",
                extra={"tau": tau, "alpha": alpha}
            )
            return WindowCertificate(tau=tau, alpha=alpha, alpha_max=window.alpha_max, certified=False)

    def solve(
            self,
            config: RunConfig,
            uncertified: bool = False,
            model: ValidatedModel | None = None,
            critical: CriticalPoint | None = None
    ) -> SolveOutcome:
        """Transition temperature, window, gap surface and the critical expansion."""
        model = model or self.model_service.build(config)
        critical = critical or self.operator_service.critical_temperature(model)
        t_c = critical.t_c

        window = self.resolve_window(model, config, t_c, uncertified)
        if not window.tau < t_c:
            raise InvalidParameter(f"Window start {window.tau!r} is not below T_c={t_c!r}")

        tolerances = config.tolerances
        grid = self.temperature_grid(t_c, window.tau, config.temps, tolerances)
        surface = asyncio.run(self.surface_service.solve_surface(
            grid, model, tolerances.picard_tol, tolerances.max_iter, t_c, window
        ))

        expansion = self.expansion_service.extract(surface, t_c, tolerances.n_fit, tolerances.fit_window)
        if np.all(expansion.v > 0):
            slope_residuals = self.expansion_service.slope_residual(expansion.v, model, t_c)
            curvature_residuals = self.expansion_service.curvature_residual(expansion.v, expansion.w, model, t_c)
        else:
            self.logger.error("Fitted slope v is not positive at every node", extra={"v_min": float(expansion.v.min())})
            slope_residuals = np.full(model.rule.size, np.nan)
            curvature_residuals = np.full(model.rule.size, np.nan)

        critical_data = CriticalData(
            t_c=t_c,
            tau=window.tau,
            alpha=window.alpha,
            certified=window.certified,
            v=expansion.v,
            w=expansion.w,
            eigenfunction=critical.eigenfunction,
            slope_residuals=slope_residuals,
            curvature_residuals=curvature_residuals
        )
        return SolveOutcome(
            model=model,
            critical=critical,
            window=window,
            surface=surface,
            expansion=expansion,
            critical_data=critical_data
        )

    def thermo(
            self,
            config: RunConfig,
            uncertified: bool = False,
            model: ValidatedModel | None = None,
            critical: CriticalPoint | None = None
    ) -> ThermoOutcome:
        outcome = self.solve(config, uncertified, model=model, critical=critical)
        t_c = outcome.critical.t_c
        curve = self.thermo_service.potential_curve(
            outcome.surface, outcome.model, t_c, outcome.window.tau, outcome.window.alpha
        )
        heat_jump = self.thermo_service.heat_jump(
            outcome.surface, outcome.expansion.v, outcome.model, t_c, self.derivative_steps(t_c, config.tolerances)
        )
        return ThermoOutcome(solve=outcome, curve=curve, heat_jump=heat_jump)

    def run_simple(self, config: RunConfig, writer: IResultWriter) -> SimpleOutcome:
        """Both envelope gap curves and the zero-temperature cross-check."""
        model = self.model_service.build(config)
        params, rule = model.params, model.rule
        count = config.temps.curve_points

        low = self.simple_gap_service.gap_curve(params.u1, count, params, rule)
        high = self.simple_gap_service.gap_curve(params.u2, count, params, rule)

        notes = []
        closed_forms = {}
        for label, curve in (("low", low), ("high", high)):
            try:
                closed_forms[label] = self.simple_gap_service.zero_temperature_gap(curve.coupling, params)
            except RadicandNegative as e:
                closed_forms[label] = None
                notes.append(f"{label}: {e.message}")

        def relative_diff(closed: float | None, curve: GapCurve) -> float | None:
            return None if closed is None else abs(closed - curve.deltas[0]) / closed

        summary = SimpleSummaryDocument(
            metadata=self.metadata("simple"),
            tau_low=low.tau,
            tau_high=high.tau,
            delta0_closed_form_low=closed_forms["low"],
            delta0_closed_form_high=closed_forms["high"],
            delta0_bisection_low=float(low.deltas[0]),
            delta0_bisection_high=float(high.deltas[0]),
            closed_form_relative_diff_low=relative_diff(closed_forms["low"], low),
            closed_form_relative_diff_high=relative_diff(closed_forms["high"], high),
            notes=notes
        )

        writer.write_csv("gap_curve_low.csv", ["T", "delta"], [low.temps, low.deltas])
        writer.write_csv("gap_curve_high.csv", ["T", "delta"], [high.temps, high.deltas])
        writer.write_json("simple_summary.json", summary)
        return SimpleOutcome(low=low, high=high, summary=summary)

    def run_solve(self, config: RunConfig, writer: IResultWriter, uncertified: bool = False) -> SolveOutcome:
        outcome = self.solve(config, uncertified)
        self.write_solve(outcome, writer)
        return outcome

    def write_solve(self, outcome: SolveOutcome, writer: IResultWriter) -> None:
        surface = outcome.surface
        rows, columns = surface.values.shape
        reports = surface.reports
        writer.write_csv(
            "surface.csv",
            ["T", "x", "u", "iterations", "residual", "certified"],
            [
                np.repeat(surface.temps, columns),
                np.tile(surface.nodes, rows),
                surface.values.ravel(),
                np.repeat([report.iterations for report in reports], columns),
                np.repeat([report.final_residual for report in reports], columns),
                np.repeat([float(report.certified) for report in reports], columns)
            ]
        )
        writer.write_json("surface.json", SurfaceDocument(
            metadata=self.metadata("solve"),
            temperatures=surface.temps.tolist(),
            nodes=surface.nodes.tolist(),
            reports=[SolveReportSchema.model_validate(report) for report in reports],
            checks=SurfaceChecksSchema.model_validate(surface.checks) if surface.checks else None
        ))

        data = outcome.critical_data
        writer.write_json("critical.json", CriticalDocument(
            metadata=self.metadata("solve"),
            t_c=data.t_c,
            tau=data.tau,
            alpha=data.alpha,
            alpha_max=outcome.window.alpha_max,
            certified=data.certified,
            spectral_radius=outcome.critical.spectral_radius,
            nodes=surface.nodes.tolist(),
            v=data.v.tolist(),
            w=data.w.tolist(),
            eigenfunction=data.eigenfunction.tolist(),
            slope_residuals=data.slope_residuals.tolist(),
            curvature_residuals=data.curvature_residuals.tolist(),
            max_slope_residual=float(np.max(data.slope_residuals)),
            max_curvature_residual=float(np.max(data.curvature_residuals))
        ))

    def run_thermo(self, config: RunConfig, writer: IResultWriter, uncertified: bool = False) -> ThermoOutcome:
        outcome = self.thermo(config, uncertified)
        curve, jump = outcome.curve, outcome.heat_jump

        writer.write_csv(
            "thermo_curve.csv",
            ["T", "psi", "entropy_diff", "heat_diff", "psi_error", "certified"],
            [
                curve.temps,
                curve.psi,
                curve.entropy_diff,
                curve.heat_diff,
                curve.psi_error,
                curve.certified.astype(float)
            ]
        )
        writer.write_json("heat_jump.json", HeatJumpDocument(
            metadata=self.metadata("thermo"),
            t_c=jump.t_c,
            formula_value=jump.formula_value,
            numeric_value=jump.numeric_value,
            curvature_value=jump.curvature_value,
            curvature_jump=jump.curvature_jump,
            relative_spread=jump.relative_spread,
            triangle_tolerance=TRIANGLE_TOLERANCE,
            triangle_pass=jump.relative_spread <= TRIANGLE_TOLERANCE,
            formula_positive=jump.formula_value > 0,
            psi_at_critical=jump.psi_at_critical,
            psi_at_critical_pass=abs(jump.psi_at_critical) < PSI_AT_CRITICAL_TOLERANCE,
            first_derivative=jump.first_derivative,
            second_derivative=jump.second_derivative,
            second_derivative_negative=jump.second_derivative < 0
        ))
        return outcome
