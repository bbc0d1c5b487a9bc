from unittest.mock import MagicMock

import numpy as np
import pytest

from bcs_gap_service.src.core.config import Settings
from bcs_gap_service.src.core.logger import Logger
from bcs_gap_service.src.domain.models.gap import WindowCertificate
from bcs_gap_service.src.domain.models.model import ModelParams
from bcs_gap_service.src.domain.schemas.config import RunConfig
from bcs_gap_service.src.infrastructure.kernel_factory import KernelFactory
from bcs_gap_service.src.infrastructure.kernels.blend import BlendKernel
from bcs_gap_service.src.infrastructure.kernels.constant import ConstantKernel
from bcs_gap_service.src.infrastructure.quadrature.gauss_legendre import build_rule
from bcs_gap_service.src.services.expansion_service import ExpansionService
from bcs_gap_service.src.services.gap_operator_service import GapOperatorService
from bcs_gap_service.src.services.model_service import ModelService
from bcs_gap_service.src.services.pipeline_service import PipelineService
from bcs_gap_service.src.services.simple_gap_service import SimpleGapService
from bcs_gap_service.src.services.surface_service import SurfaceService
from bcs_gap_service.src.services.thermo_service import ThermoService


@pytest.fixture
def mock_logger():
    """Provides a mock logger for testing."""
    return MagicMock(spec=Logger)


@pytest.fixture
def test_settings():
    """Provides test settings configuration."""
    return Settings(max_concurrent_solves=2, log_level="debug")


@pytest.fixture
def model_params():
    """Provides the desk-scale model parameters."""
    return ModelParams(epsilon=0.01, hbar_omega_d=1.0, n0=1.0, u1=0.24, u2=0.26)


@pytest.fixture
def small_rule(model_params):
    """Provides a coarse quadrature rule that keeps solver tests fast."""
    return build_rule(model_params.epsilon, model_params.hbar_omega_d, 16, 4)


@pytest.fixture
def kernel_factory():
    """Provides a kernel factory."""
    return KernelFactory()


@pytest.fixture
def model_service(kernel_factory, mock_logger):
    return ModelService(kernel_factory, mock_logger)


@pytest.fixture
def simple_gap_service(mock_logger):
    return SimpleGapService(mock_logger)


@pytest.fixture
def operator_service(simple_gap_service, mock_logger):
    return GapOperatorService(simple_gap_service, mock_logger)


@pytest.fixture
def surface_service(operator_service, simple_gap_service, test_settings, mock_logger):
    return SurfaceService(operator_service, simple_gap_service, test_settings, mock_logger)


@pytest.fixture
def expansion_service(mock_logger):
    return ExpansionService(mock_logger)


@pytest.fixture
def thermo_service(simple_gap_service, mock_logger):
    return ThermoService(simple_gap_service, mock_logger)


@pytest.fixture
def pipeline_service(
        model_service,
        simple_gap_service,
        operator_service,
        surface_service,
        expansion_service,
        thermo_service,
        test_settings,
        mock_logger
):
    """Provides a fully wired PipelineService."""
    return PipelineService(
        model_service=model_service,
        simple_gap_service=simple_gap_service,
        operator_service=operator_service,
        surface_service=surface_service,
        expansion_service=expansion_service,
        thermo_service=thermo_service,
        settings=test_settings,
        logger=mock_logger
    )


@pytest.fixture
def constant_model(model_service, model_params, small_rule):
    """Provides a validated model with the constant kernel U = 0.25."""
    kernel = ConstantKernel(0.25, model_params.epsilon, model_params.hbar_omega_d)
    return model_service.validate(model_params, kernel, small_rule)


@pytest.fixture
def blend_model(model_service, model_params, small_rule):
    """Provides a validated model with a gaussian blend kernel."""
    kernel = BlendKernel(0.245, 0.255, "gaussian", 0.25, model_params.epsilon, model_params.hbar_omega_d)
    return model_service.validate(model_params, kernel, small_rule)


@pytest.fixture
def uncertified_window():
    """Provides a window certificate that does not certify any row."""
    return WindowCertificate(tau=0.0, alpha=1.2, alpha_max=0.95, certified=False)


@pytest.fixture
def run_config_data():
    """Provides a small but complete run configuration document."""
    return {
        "model": {"epsilon": 0.01, "hbar_omega_d": 1.0, "n0": 1.0, "u1": 0.24, "u2": 0.26},
        "kernel": {"kind": "constant", "value": 0.25},
        "quadrature": {"panels": 16, "points": 4},
        "window": {"mode": "auto", "alpha_max": 0.95, "fallback_ratio": 0.8, "ladder": 8, "grid": 5},
        "temps": {"count": 9, "cluster_exp": 2.0, "curve_points": 12},
        "tolerances": {"picard_tol": 1e-11, "max_iter": 200000, "n_fit": 5, "fit_window": 0.05,
                       "h1": 0.02, "h2": 0.01},
        "outputs": {"dir": "results", "formats": ["csv", "json"]},
        "verify": {"seed": 7, "lipschitz_pairs": 5, "ordering_points": 12}
    }


@pytest.fixture
def run_config(run_config_data):
    return RunConfig.model_validate(run_config_data)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
