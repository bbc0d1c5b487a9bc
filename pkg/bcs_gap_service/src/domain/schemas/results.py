from datetime import datetime

from pydantic import BaseModel, ConfigDict, Field

from bcs_gap_service.src.domain.models.gap import BoundKind
from bcs_gap_service.src.domain.models.report import CheckStatus


class Metadata(BaseModel):
    """Run metadata; ``generated_at`` is the only non-deterministic field of any document."""

    app_name: str
    command: str
    generated_at: datetime


class SimpleSummaryDocument(BaseModel):
    metadata: Metadata
    tau_low: float
    tau_high: float
    delta0_closed_form_low: float | None
    delta0_closed_form_high: float | None
    delta0_bisection_low: float
    delta0_bisection_high: float
    closed_form_relative_diff_low: float | None
    closed_form_relative_diff_high: float | None
    notes: list[str] = Field(default_factory=list)


class SolveReportSchema(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    temperature: float
    iterations: int
    final_residual: float
    empirical_ratio: float
    contraction_ratio: float
    tolerance: float
    relaxed: bool
    monotone: bool
    certified: bool
    fixed_point_error_bound: float | None
    bound_kind: BoundKind


class SurfaceChecksSchema(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    sandwich_ok: bool
    sandwich_violation: float
    monotone_ok: bool
    monotone_violation: float
    critical_row_ok: bool
    critical_row_norm: float


class SurfaceDocument(BaseModel):
    metadata: Metadata
    temperatures: list[float]
    nodes: list[float]
    reports: list[SolveReportSchema]
    checks: SurfaceChecksSchema | None


class CriticalDocument(BaseModel):
    metadata: Metadata
    t_c: float
    tau: float
    alpha: float
    alpha_max: float
    certified: bool
    spectral_radius: float
    nodes: list[float]
    v: list[float]
    w: list[float]
    eigenfunction: list[float]
    slope_residuals: list[float]
    curvature_residuals: list[float]
    max_slope_residual: float
    max_curvature_residual: float


class HeatJumpDocument(BaseModel):
    """Heat-jump routes and the measured second-order transition conditions."""

    metadata: Metadata
    t_c: float
    formula_value: float
    numeric_value: float
    curvature_value: float
    curvature_jump: float
    relative_spread: float
    triangle_tolerance: float
    triangle_pass: bool
    formula_positive: bool
    psi_at_critical: float
    psi_at_critical_pass: bool
    first_derivative: float
    second_derivative: float
    second_derivative_negative: bool


class CheckSchema(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    id: str
    claim: str
    reference: str
    status: CheckStatus
    measured: float | None
    tolerance: float | None
    detail: str


class VerifyReportDocument(BaseModel):
    metadata: Metadata
    overall: CheckStatus
    checks: list[CheckSchema]
