from bcs_gap_service.src.core.exceptions import ConfigurationError
from bcs_gap_service.src.domain.interfaces.kernel import IPotentialKernel
from bcs_gap_service.src.domain.models.model import KernelKind, ModelParams
from bcs_gap_service.src.domain.schemas.config import KernelConfig
from bcs_gap_service.src.infrastructure.kernels.blend import BlendKernel
from bcs_gap_service.src.infrastructure.kernels.constant import ConstantKernel
from bcs_gap_service.src.infrastructure.kernels.separable import SeparableKernel
from bcs_gap_service.src.infrastructure.kernels.tabulated import TabulatedKernel


class KernelFactory:
    """Factory for creating potential kernels from their configuration."""

    def __init__(self) -> None:
        self._kernels = {}
        self._kernel_classes = {
            KernelKind.CONSTANT: ConstantKernel,
            KernelKind.BLEND: BlendKernel,
            KernelKind.SEPARABLE: SeparableKernel,
            KernelKind.TABULATED: TabulatedKernel
        }

    def create(self, config: KernelConfig, params: ModelParams) -> IPotentialKernel:
        """Get or create the kernel for a configuration on the parameter interval"""
        cache_key = (config.model_dump_json(), params.epsilon, params.hbar_omega_d)
        if cache_key not in self._kernels:
            kind = KernelKind(config.kind)
            kernel_class = self._kernel_classes.get(kind)
            if not kernel_class:
                raise ConfigurationError(f"No kernel available for kind: {kind}")

            payload = config.model_dump(exclude={"kind"})
            self._kernels[cache_key] = kernel_class(**payload, lower=params.epsilon, upper=params.hbar_omega_d)

        return self._kernels[cache_key]
