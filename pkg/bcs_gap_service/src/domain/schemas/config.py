import json
from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from bcs_gap_service.src.core.exceptions import ConfigurationError
from bcs_gap_service.src.domain.models.model import BlendProfile, ModelParams


class ModelConfig(BaseModel):
    """Physical parameters; ordering constraints are checked by model validation."""

    model_config = ConfigDict(extra="forbid")

    epsilon: float = Field(..., gt=0)
    hbar_omega_d: float = Field(..., gt=0)
    n0: float = Field(1.0, gt=0)
    u1: float = Field(..., gt=0)
    u2: float = Field(..., gt=0)

    def to_params(self) -> ModelParams:
        return ModelParams(
            epsilon=self.epsilon,
            hbar_omega_d=self.hbar_omega_d,
            n0=self.n0,
            u1=self.u1,
            u2=self.u2
        )


class ConstantKernelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["constant"] = "constant"
    value: float


class BlendKernelConfig(BaseModel):
    """U = low + (high - low) * profile(s, t) on normalized energies s, t in [0, 1]."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["blend"] = "blend"
    low: float
    high: float
    profile: BlendProfile = BlendProfile.GAUSSIAN
    width: float = Field(0.25, gt=0)


class SeparableKernelConfig(BaseModel):
    """U(x, xi) = left(x) * right(xi), factors sampled on an energy grid."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["separable"] = "separable"
    grid: list[float] = Field(..., min_length=2)
    left: list[float] = Field(..., min_length=2)
    right: list[float] = Field(..., min_length=2)

    @model_validator(mode="after")
    def validate_lengths(self):
        if not len(self.grid) == len(self.left) == len(self.right):
            raise ValueError("grid, left and right must have the same length")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:], strict=False)):
            raise ValueError("grid must be strictly increasing")
        return self


class TabulatedKernelConfig(BaseModel):
    """Table of U on grid x grid, interpolated bilinearly."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["tabulated"] = "tabulated"
    grid: list[float] = Field(..., min_length=2)
    table: list[list[float]]

    @model_validator(mode="after")
    def validate_table(self):
        size = len(self.grid)
        if len(self.table) != size or any(len(row) != size for row in self.table):
            raise ValueError(f"table must be {size}x{size} to match the grid")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:], strict=False)):
            raise ValueError("grid must be strictly increasing")
        return self


KernelConfig = Annotated[
    ConstantKernelConfig | BlendKernelConfig | SeparableKernelConfig | TabulatedKernelConfig,
    Field(discriminator="kind")
]


class QuadratureConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    panels: int = Field(64, ge=1)
    points: int = Field(8, ge=2, le=16)


class WindowConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["auto", "explicit"] = "auto"
    tau: float | None = Field(None, gt=0)
    alpha_max: float = Field(0.95, gt=0, lt=1)
    fallback_ratio: float = Field(0.8, gt=0, lt=1)
    ladder: int = Field(48, ge=2)
    grid: int = Field(9, ge=2)

    @model_validator(mode="after")
    def validate_explicit_tau(self):
        if self.mode == "explicit" and self.tau is None:
            raise ValueError("window.tau is required when window.mode is 'explicit'")
        return self


class TemperatureGridConfig(BaseModel):
    """Surface grid size; grids below seven points are rejected by the pipelines."""

    model_config = ConfigDict(extra="forbid")

    count: int = Field(16, ge=3)
    cluster_exp: float = Field(2.0, ge=1)
    curve_points: int = Field(64, ge=3)


class ToleranceConfig(BaseModel):
    """Solver tolerances; ``fit_window``, ``h1`` and ``h2`` are fractions of T_c."""

    model_config = ConfigDict(extra="forbid")

    picard_tol: float = Field(1e-12, gt=0)
    max_iter: int = Field(200_000, ge=1)
    n_fit: int = Field(5, ge=3)
    fit_window: float = Field(0.05, gt=0, le=0.5)
    h1: float = Field(0.02, gt=0, lt=0.25)
    h2: float = Field(0.01, gt=0, lt=0.25)

    @model_validator(mode="after")
    def validate_steps(self):
        if self.h1 == self.h2:
            raise ValueError("h1 and h2 must differ")
        return self


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dir: str = "results"
    formats: list[Literal["csv", "json"]] = Field(default_factory=lambda: ["csv", "json"])


class VerifyConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = 20240531
    lipschitz_pairs: int = Field(20, ge=1)
    ordering_points: int = Field(50, ge=2)


class RunConfig(BaseModel):
    """Complete configuration of one invocation."""

    model_config = ConfigDict(extra="forbid")

    model: ModelConfig
    kernel: KernelConfig
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    window: WindowConfig = Field(default_factory=WindowConfig)
    temps: TemperatureGridConfig = Field(default_factory=TemperatureGridConfig)
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    outputs: OutputConfig = Field(default_factory=OutputConfig)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)

    @field_validator("kernel", mode="before")
    @classmethod
    def normalize_kind(cls, v):
        if isinstance(v, dict) and isinstance(v.get("kind"), str):
            return {**v, "kind": v["kind"].lower()}
        return v


def load_run_config(path: str | Path) -> RunConfig:
    """Read and validate a JSON run configuration."""
    config_path = Path(path)
    try:
        raw = config_path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read config file {config_path}: {e.strerror or e}", path=str(config_path))

    try:
        document = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Config file {config_path} is not valid JSON: {e}", path=str(config_path))

    try:
        return RunConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigurationError(f"Config file {config_path} failed validation: {e}", path=str(config_path))
