import numpy as np
import pytest

from bcs_gap_service.src.core.exceptions import InvalidParameter, NoCertifiedWindow, NotConverged
from bcs_gap_service.src.domain.models.gap import BoundKind
from bcs_gap_service.src.domain.models.model import ModelParams
from bcs_gap_service.src.infrastructure.kernels.constant import ConstantKernel
from bcs_gap_service.src.infrastructure.quadrature.gauss_legendre import build_rule


class TestApply:
    """Test cases for the discretized gap operator."""

    def test_zero_row(self, operator_service, blend_model):
        """Test that zero is a fixed point."""
        # Act
        image = operator_service.apply(np.zeros(blend_model.rule.size), 0.02, blend_model)

        # Assert
        assert np.all(image == 0.0)

    def test_envelope(self, operator_service, simple_gap_service, blend_model):
        """Test A(Delta_2 1) <= Delta_2."""
        # Arrange
        params, rule = blend_model.params, blend_model.rule
        t = 0.01
        gap = simple_gap_service.gap(params.u2, t, params, rule)

        # Act
        image = operator_service.apply(np.full(rule.size, gap), t, blend_model)

        # Assert
        assert np.all(image <= gap + 1e-14)

    def test_nonincreasing_in_temperature(self, operator_service, blend_model, rng):
        """Test that A u does not grow with T."""
        # Arrange
        row = rng.uniform(0.0, 0.02, size=blend_model.rule.size)

        # Act
        cold = operator_service.apply(row, 0.01, blend_model)
        hot = operator_service.apply(row, 0.015, blend_model)

        # Assert
        assert np.all(hot <= cold)


class TestSpectralRadius:
    """Test cases for the linearized operator."""

    def test_rank_one_eigenvalue(self, operator_service, constant_model):
        """Test that a constant kernel has eigenvalue U * integral tanh(xi/2T)/xi."""
        # Arrange
        t = 0.015
        expected = 0.25 * constant_model.rule.integrate(
            np.tanh(constant_model.nodes / (2.0 * t)) / constant_model.nodes
        )

        # Act
        rho, vector, _ = operator_service.spectral_radius(t, constant_model)

        # Assert
        assert rho == pytest.approx(expected, rel=1e-12)
        np.testing.assert_allclose(vector, 1.0, rtol=1e-12)

    def test_eigenvector_positive(self, operator_service, blend_model):
        """Test that the dominant eigenvector is positive and sup-normalized."""
        # Act
        _, vector, _ = operator_service.spectral_radius(0.015, blend_model)

        # Assert
        assert np.all(vector > 0)
        assert vector.max() == pytest.approx(1.0)


class TestCriticalTemperature:
    """Test cases for the transition temperature."""

    def test_constant_kernel_matches_simple_tau(self, operator_service, simple_gap_service, constant_model):
        """Test that a constant kernel reproduces the constant-coupling tau."""
        # Arrange
        params, rule = constant_model.params, constant_model.rule
        tau = simple_gap_service.critical_temperature(0.25, params, rule)

        # Act
        critical = operator_service.critical_temperature(constant_model)

        # Assert
        assert abs(critical.t_c - tau) / tau < 1e-8
        assert abs(critical.spectral_radius - 1.0) < 1e-10

    def test_bracketed_by_envelopes(self, operator_service, simple_gap_service, blend_model):
        """Test tau_1 < T_c < tau_2 and the sign change of rho - 1."""
        # Arrange
        params, rule = blend_model.params, blend_model.rule
        tau_low = simple_gap_service.critical_temperature(params.u1, params, rule)
        tau_high = simple_gap_service.critical_temperature(params.u2, params, rule)

        # Act
        critical = operator_service.critical_temperature(blend_model)

        # Assert
        assert tau_low < critical.t_c < tau_high
        below, _, _ = operator_service.spectral_radius(critical.t_c * (1.0 - 1e-3), blend_model)
        above, _, _ = operator_service.spectral_radius(critical.t_c * (1.0 + 1e-3), blend_model)
        assert below > 1.0 > above
        assert not critical.eigenfunction.flags.writeable


class TestContractionConstant:
    """Test cases for alpha and the window search."""

    def test_alpha_above_envelope_tau(self, operator_service, model_service, simple_gap_service, small_rule):
        """Test alpha = 0.8 for U = 0.8 u2 when the gap envelope has vanished."""
        # Arrange
        params = ModelParams(epsilon=0.01, hbar_omega_d=1.0, n0=1.0, u1=0.2, u2=0.26)
        rule = small_rule
        model = model_service.validate(params, ConstantKernel(0.8 * params.u2, 0.01, 1.0), rule)
        tau_high = simple_gap_service.critical_temperature(params.u2, params, rule)

        # Act
        alpha = operator_service.alpha_bound(tau_high, np.array([tau_high, 1.2 * tau_high]), model, strict=False)

        # Assert
        assert alpha == pytest.approx(0.8, rel=1e-9)

    def test_alpha_dominates_spectral_radius(self, operator_service, blend_model):
        """Test that alpha is at least the spectral radius at the window start."""
        # Arrange
        critical = operator_service.critical_temperature(blend_model)
        tau = 0.8 * critical.t_c

        # Act
        alpha = operator_service.alpha_bound(tau, operator_service.window_grid(tau, critical.t_c, 5), blend_model,
                                             t_c=critical.t_c)
        rho, _, _ = operator_service.spectral_radius(tau, blend_model)

        # Assert
        assert alpha >= rho > 1.0

    def test_strict_grid_check(self, operator_service, blend_model):
        """Test that a grid starting below tau is rejected."""
        # Act & Assert
        with pytest.raises(InvalidParameter):
            operator_service.alpha_bound(0.01, np.array([0.005, 0.01]), blend_model)

    def test_alpha_nonincreasing_along_tau_ladder(self, operator_service, constant_model):
        """Test that alpha never grows as the window start moves toward T_c."""
        # Arrange
        t_c = operator_service.critical_temperature(constant_model).t_c
        ladder = t_c * np.linspace(0.5, 0.95, 5)

        # Act
        alphas = [
            operator_service.alpha_bound(float(tau), operator_service.window_grid(float(tau), t_c, 4), constant_model,
                                         t_c=t_c)
            for tau in ladder
        ]

        # Assert
        assert np.all(np.diff(alphas) <= 0)

    def test_alpha_drops_when_epsilon_doubles(self, operator_service, model_service):
        """Test that doubling the lower cutoff does not raise alpha."""
        # Arrange
        models = []
        for epsilon in (0.005, 0.01):
            params = ModelParams(epsilon=epsilon, hbar_omega_d=1.0, n0=1.0, u1=0.24, u2=0.26)
            kernel = ConstantKernel(0.25, epsilon, params.hbar_omega_d)
            models.append(model_service.validate(params, kernel, build_rule(epsilon, params.hbar_omega_d, 16, 4)))
        t_c = min(operator_service.critical_temperature(model).t_c for model in models)
        tau = 0.6 * t_c
        grid = operator_service.window_grid(tau, t_c, 4)

        # Act
        narrow, wide = (operator_service.alpha_bound(tau, grid, model, strict=False) for model in models)

        # Assert
        assert wide <= narrow

    def test_auto_window_not_certified(self, operator_service, constant_model):
        """Test that no window start reaches alpha_max below one."""
        # Arrange
        critical = operator_service.critical_temperature(constant_model)

        # Act & Assert
        with pytest.raises(NoCertifiedWindow) as error:
            operator_service.auto_window(constant_model, critical.t_c, 0.95, ladder=6, grid=4)
        assert error.value.context["best_alpha"] > 1.0

    def test_auto_window_rejects_alpha_max(self, operator_service, constant_model):
        """Test that alpha_max must lie in (0, 1)."""
        # Act & Assert
        with pytest.raises(InvalidParameter):
            operator_service.auto_window(constant_model, 0.02, 1.5)

    def test_certify_window(self, operator_service, constant_model):
        """Test an explicit window start."""
        # Arrange
        critical = operator_service.critical_temperature(constant_model)

        # Act
        certificate = operator_service.certify_window(0.8 * critical.t_c, constant_model, critical.t_c, 0.95, 4)

        # Assert
        assert not certificate.certified
        assert certificate.alpha > 1.0

    def test_certify_window_outside_range(self, operator_service, constant_model):
        """Test that tau must lie below T_c."""
        # Act & Assert
        with pytest.raises(InvalidParameter):
            operator_service.certify_window(0.03, constant_model, 0.02, 0.95, 4)


class TestPicardSolve:
    """Test cases for the Picard iteration."""

    def test_constant_kernel_fixed_point(self, operator_service, simple_gap_service, constant_model):
        """Test that the constant-kernel fixed point is the constant-coupling gap."""
        # Arrange
        params, rule = constant_model.params, constant_model.rule
        tau = simple_gap_service.critical_temperature(0.25, params, rule)

        for t in tau * np.array([0.2, 0.6, 0.9]):
            # Act
            row, report = operator_service.picard_solve(t, constant_model, 1e-12, 200_000)

            # Assert
            expected = simple_gap_service.gap(0.25, t, params, rule, tau=tau)
            np.testing.assert_allclose(row, expected, atol=1e-9)
            assert report.monotone
            assert report.bound_kind == BoundKind.EMPIRICAL

    def test_collapses_above_critical(self, operator_service, constant_model):
        """Test that the iteration collapses to zero above T_c."""
        # Arrange
        critical = operator_service.critical_temperature(constant_model)

        # Act
        row, _ = operator_service.picard_solve(1.01 * critical.t_c, constant_model, 1e-12, 200_000)

        # Assert
        assert np.max(np.abs(row)) < 1e-11

    def test_positive_below_critical(self, operator_service, blend_model):
        """Test that the iteration stays positive below T_c."""
        # Arrange
        critical = operator_service.critical_temperature(blend_model)

        # Act
        row, report = operator_service.picard_solve(0.98 * critical.t_c, blend_model, 1e-12, 200_000,
                                                    t_c=critical.t_c)

        # Assert
        assert row.min() > 0
        assert report.relaxed
        assert report.tolerance == pytest.approx(1e-12 / 0.02)

    def test_certified_bound(self, operator_service, constant_model):
        """Test the certified a-posteriori bound alpha * step / (1 - alpha)."""
        # Act
        _, report = operator_service.picard_solve(0.01, constant_model, 1e-12, 200_000, alpha=0.5, certified=True)

        # Assert
        assert report.bound_kind == BoundKind.CERTIFIED
        assert report.fixed_point_error_bound == pytest.approx(report.final_residual)

    def test_not_converged(self, operator_service, constant_model):
        """Test that the iteration cap raises NotConverged."""
        # Act & Assert
        with pytest.raises(NotConverged) as error:
            operator_service.picard_solve(0.01, constant_model, 1e-12, 2)
        assert error.value.context["iterations"] == 2
        assert error.value.exit_code == 4

    def test_nonpositive_temperature(self, operator_service, constant_model):
        """Test that T must be positive."""
        # Act & Assert
        with pytest.raises(InvalidParameter):
            operator_service.picard_solve(0.0, constant_model, 1e-12, 10)
