import numpy as np

from bcs_gap_service.src.core.exceptions import (
    CouplingOrderViolation,
    CutoffOrderViolation,
    GapSolverException,
    InvalidParameter,
    KernelOutOfBand,
    ModelValidationError,
)
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.interfaces.kernel import IPotentialKernel
from bcs_gap_service.src.domain.models.model import ModelParams, ValidatedModel
from bcs_gap_service.src.domain.models.quadrature import QuadratureRule
from bcs_gap_service.src.domain.schemas.config import RunConfig
from bcs_gap_service.src.infrastructure.kernel_factory import KernelFactory
from bcs_gap_service.src.infrastructure.quadrature.gauss_legendre import build_rule


class ModelService:
    """Builds and validates the physical model."""

    def __init__(self, kernel_factory: KernelFactory, logger: Logger):
        self.kernel_factory = kernel_factory
        self.logger = logger

    def parameter_errors(self, params: ModelParams) -> list[GapSolverException]:
        errors: list[GapSolverException] = []
        if not params.epsilon > 0:
            errors.append(InvalidParameter(f"epsilon must be positive, got {params.epsilon}"))
        if not params.epsilon < params.hbar_omega_d:
            errors.append(CutoffOrderViolation(
                f"epsilon={params.epsilon} must be smaller than hbar_omega_d={params.hbar_omega_d}"
            ))
        if not params.u1 > 0:
            errors.append(InvalidParameter(f"u1 must be positive, got {params.u1}"))
        if not params.u1 < params.u2:
            errors.append(CouplingOrderViolation(f"u1={params.u1} must be smaller than u2={params.u2}"))
        if not params.n0 > 0:
            errors.append(InvalidParameter(f"n0 must be positive, got {params.n0}"))
        return errors

    def kernel_band_error(self, params: ModelParams, matrix: np.ndarray, nodes: np.ndarray) -> KernelOutOfBand | None:
        """Worst violation of u1 < U < u2 over the node pairs, if any."""
        excess = np.maximum(params.u1 - matrix, matrix - params.u2)
        worst = np.unravel_index(int(np.argmax(excess)), excess.shape)
        if excess[worst] < 0:
            return None

        x, xi, value = float(nodes[worst[0]]), float(nodes[worst[1]]), float(matrix[worst])
        return KernelOutOfBand(
            f"U({x:.6g}, {xi:.6g}) = {value!r} is outside the open band ({params.u1}, {params.u2})",
            x=x,
            xi=xi,
            value=value
        )

    def validate(self, params: ModelParams, kernel: IPotentialKernel, rule: QuadratureRule) -> ValidatedModel:
        """Return the validated model or raise ModelValidationError listing every violation."""
        errors = self.parameter_errors(params)
        if rule.lower != params.epsilon or rule.upper != params.hbar_omega_d:
            errors.append(InvalidParameter(
                f"Quadrature interval [{rule.lower}, {rule.upper}] does not match "
                f"[{params.epsilon}, {params.hbar_omega_d}]"
            ))

        matrix = None
        if not errors:
            matrix = kernel.matrix(rule.nodes, rule.nodes)
            band_error = self.kernel_band_error(params, matrix, rule.nodes)
            if band_error is not None:
                errors.append(band_error)

        if errors:
            self.logger.warning(
                f"Model validation failed with {len(errors)} error(s)",
                extra={"errors": [error.message for error in errors]}
            )
            raise ModelValidationError(errors)

        matrix.setflags(write=False)
        self.logger.debug(
            "Model validated",
            extra={
                "kernel": kernel.kind.value,
                "nodes": rule.size,
                "u_min": float(matrix.min()),
                "u_max": float(matrix.max())
            }
        )
        return ValidatedModel(params=params, kernel=kernel, rule=rule, matrix=matrix)

    def eval_kernel(self, model: ValidatedModel, x: float, xi: float) -> float:
        return model.kernel.evaluate(x, xi)

    def build(self, config: RunConfig) -> ValidatedModel:
        """Validate parameters, build the rule and kernel, then check the kernel band."""
        params = config.model.to_params()
        errors = self.parameter_errors(params)
        if errors:
            raise ModelValidationError(errors)

        rule = build_rule(params.epsilon, params.hbar_omega_d, config.quadrature.panels, config.quadrature.points)
        kernel = self.kernel_factory.create(config.kernel, params)
        return self.validate(params, kernel, rule)
