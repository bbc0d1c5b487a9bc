import math
from dataclasses import replace

import numpy as np
import pytest

from bcs_gap_service.src.core.exceptions import GridTooCoarse, InvalidParameter, MissingTemperatures
from bcs_gap_service.src.domain.models.gap import BoundKind, GapSurface, SolveReport
from bcs_gap_service.src.domain.models.model import ModelParams
from bcs_gap_service.src.infrastructure.kernels.constant import ConstantKernel
from bcs_gap_service.src.infrastructure.quadrature.gauss_legendre import build_rule
from bcs_gap_service.src.services.thermo_service import finite_difference_weights


def _report(temperature: float) -> SolveReport:
    return SolveReport(
        temperature=temperature,
        iterations=1,
        final_residual=0.0,
        empirical_ratio=0.0,
        contraction_ratio=0.0,
        tolerance=1e-12,
        relaxed=False,
        monotone=True,
        certified=False,
        fixed_point_error_bound=0.0,
        bound_kind=BoundKind.EMPIRICAL
    )


class TestFiniteDifferenceWeights:
    """Test cases for finite_difference_weights."""

    @pytest.mark.parametrize("order, expected", [(0, 1.0), (1, 3.0), (2, 6.0)])
    def test_exact_on_cubic(self, order, expected):
        """Test that five uneven offsets differentiate x^3 exactly at x = 1."""
        # Arrange
        offsets = np.array([-0.3, -0.1, 0.0, 0.2, 0.5])

        # Act
        weights = finite_difference_weights(offsets, order)

        # Assert
        assert weights @ (1.0 + offsets) ** 3 == pytest.approx(expected, rel=1e-10)


class TestPotentialDifference:
    """Test cases for ThermoService.potential_difference."""

    def test_zero_row(self, thermo_service, constant_model):
        """Test that the normal state has Psi = 0 exactly."""
        # Act
        psi = thermo_service.potential_difference(0.01, np.zeros(constant_model.rule.size), constant_model)

        # Assert
        assert psi == 0.0

    def test_negative_below_critical(self, thermo_service, operator_service, constant_model):
        """Test that the gapped state lies below the normal state."""
        # Arrange
        t_c = operator_service.critical_temperature(constant_model).t_c
        row, _ = operator_service.picard_solve(0.8 * t_c, constant_model, 1e-12, 200_000)

        # Act
        psi = thermo_service.potential_difference(0.8 * t_c, row, constant_model)

        # Assert
        assert psi < 0

    def test_nonpositive_temperature(self, thermo_service, constant_model):
        """Test that T must be positive."""
        # Act & Assert
        with pytest.raises(InvalidParameter):
            thermo_service.potential_difference(0.0, np.zeros(constant_model.rule.size), constant_model)

    def test_small_gap_is_quartic(self, thermo_service, constant_model):
        """Test that a row with u / xi = 1e-4 gives the leading u^4 term instead of rounding noise."""
        # Arrange
        t = 0.01
        xi = constant_model.rule.nodes
        row = 1e-4 * xi
        half = xi / (2.0 * t)
        slope = (1.0 / np.cosh(half) ** 2 / (2.0 * t * xi) - np.tanh(half) / xi**2) / (2.0 * xi)
        expected = constant_model.params.n0 * constant_model.rule.integrate(0.5 * slope * row**4)

        # Act
        psi = thermo_service.potential_difference(t, row, constant_model)
        doubled = thermo_service.potential_difference(t, 2.0 * row, constant_model)

        # Assert
        assert expected < 0
        assert psi == pytest.approx(expected, rel=1e-5)
        assert doubled / psi == pytest.approx(16.0, rel=1e-5)

    def test_error_bound_linear(self, thermo_service, model_params):
        """Test that the error bound scales with the sup error."""
        # Act
        single = thermo_service.potential_error_bound(1e-10, 0.9, model_params, 0.015, 0.012, 0.025)
        double = thermo_service.potential_error_bound(2e-10, 0.9, model_params, 0.015, 0.012, 0.025)

        # Assert
        assert single > 0
        assert double == pytest.approx(2.0 * single)


class TestHeatJump:
    """Test cases for the heat-jump routes."""

    def test_formula_matches_curvature(self, thermo_service, operator_service, constant_model):
        """Test that the heat-jump formula equals -T_c times the curvature at T_c."""
        # Arrange
        t_c = operator_service.critical_temperature(constant_model).t_c
        v = np.full(constant_model.rule.size, 2.0)

        # Act
        formula = thermo_service.heat_jump_formula(v, constant_model, t_c)
        curvature = thermo_service.curvature_at_critical(v, constant_model, t_c)

        # Assert
        assert curvature < 0
        assert formula > 0
        assert formula == pytest.approx(-t_c * curvature, rel=1e-8)

    def test_curvature_quadratic_in_v(self, thermo_service, constant_model):
        """Test that doubling v multiplies the curvature by four."""
        # Arrange
        v = np.linspace(1.0, 3.0, constant_model.rule.size)

        # Act
        single = thermo_service.curvature_at_critical(v, constant_model, 0.015)
        double = thermo_service.curvature_at_critical(2.0 * v, constant_model, 0.015)

        # Assert
        assert double == pytest.approx(4.0 * single, rel=1e-12)

    def test_linear_in_density_of_states(self, thermo_service, model_service, model_params, small_rule):
        """Test that the formula scales with N_0."""
        # Arrange
        doubled = ModelParams(
            epsilon=model_params.epsilon,
            hbar_omega_d=model_params.hbar_omega_d,
            n0=2.0 * model_params.n0,
            u1=model_params.u1,
            u2=model_params.u2
        )
        models = [
            model_service.validate(params, ConstantKernel(0.25, params.epsilon, params.hbar_omega_d), small_rule)
            for params in (model_params, doubled)
        ]
        v = np.full(small_rule.size, 1.5)

        # Act
        single, double = (thermo_service.heat_jump_formula(v, model, 0.015) for model in models)

        # Assert
        assert double == pytest.approx(2.0 * single, rel=1e-12)


class TestCutoffTerm:
    """Test cases for ThermoService.cutoff_term."""

    def test_constant_slope_is_logarithmic(self, thermo_service, model_params):
        """Test that a constant v gives N_0 v ln(hbar_omega_d / epsilon)."""
        # Arrange
        rule = build_rule(model_params.epsilon, model_params.hbar_omega_d, 128, 8)

        # Act
        term = thermo_service.cutoff_term(np.full(rule.size, 2.5), model_params, rule)

        # Assert
        assert term == pytest.approx(2.5 * math.log(model_params.hbar_omega_d / model_params.epsilon), rel=1e-9)

    def test_grows_as_cutoff_shrinks(self, thermo_service, simple_gap_service, model_params):
        """Test that the term gains about N_0 v ln 10 per decade of epsilon while Psi'' stays finite."""
        # Arrange
        terms, slopes, curvatures = [], [], []
        for epsilon in (1e-2, 1e-3, 1e-4):
            params = replace(model_params, epsilon=epsilon)
            rule = build_rule(epsilon, params.hbar_omega_d, math.ceil(params.width / epsilon), 8)
            tau = simple_gap_service.critical_temperature(0.25, params, rule)
            slope = np.full(rule.size, simple_gap_service.squared_gap_slope(tau, rule))

            # Act
            terms.append(thermo_service.cutoff_term(slope, params, rule))
            slopes.append(slope[0])
            curvatures.append(thermo_service.band_curvature(slope, params, rule, tau))

        # Assert
        assert terms[0] < terms[1] < terms[2]
        for epsilon, term, v in zip((1e-2, 1e-3, 1e-4), terms, slopes, strict=True):
            assert term == pytest.approx(v * math.log(1.0 / epsilon), rel=1e-6)
        assert all(math.isfinite(value) and value < 0 for value in curvatures)
        assert curvatures[2] == pytest.approx(curvatures[1], rel=0.1)


class TestSurfaceDerivatives:
    """Test cases for estimates taken from a solved surface."""

    @staticmethod
    def _surface(temps: np.ndarray, size: int) -> GapSurface:
        return GapSurface(temps=temps, nodes=np.linspace(0.01, 1.0, size), values=np.zeros((temps.size, size)),
                          reports=[_report(float(t)) for t in temps])

    def test_curve_needs_seven_temperatures(self, thermo_service, constant_model):
        """Test that six temperatures are too few for the potential curve."""
        # Arrange
        temps = np.array([0.010, 0.011, 0.012, 0.013, 0.014, 0.015])
        surface = self._surface(temps, constant_model.rule.size)

        # Act & Assert
        with pytest.raises(GridTooCoarse) as error:
            thermo_service.potential_curve(surface, constant_model, 0.015, 0.010, 0.9)
        assert error.value.exit_code == 4

    def test_equal_steps_rejected(self, thermo_service, constant_model):
        """Test that Richardson extrapolation needs two different steps."""
        # Arrange
        surface = self._surface(np.array([0.010, 0.011, 0.012, 0.013, 0.014]), constant_model.rule.size)

        # Act & Assert
        with pytest.raises(InvalidParameter):
            thermo_service.second_derivative_estimate(surface, constant_model, 0.014, (0.001, 0.001))

    def test_missing_row(self, thermo_service, constant_model):
        """Test that a derivative needing an absent temperature raises MissingTemperatures."""
        # Arrange
        surface = self._surface(np.array([0.010, 0.011, 0.012, 0.013, 0.014]), constant_model.rule.size)

        # Act & Assert
        with pytest.raises(MissingTemperatures):
            thermo_service.first_derivative_estimate(surface, constant_model, 0.014, 0.0015)

    def test_normal_state_curve(self, thermo_service, constant_model):
        """Test that a vanishing surface gives a vanishing potential curve."""
        # Arrange
        temps = np.array([0.009, 0.010, 0.011, 0.012, 0.013, 0.014, 0.015])
        surface = self._surface(temps, constant_model.rule.size)

        # Act
        curve = thermo_service.potential_curve(surface, constant_model, 0.015, 0.009, 0.9)

        # Assert
        assert np.all(curve.psi == 0.0)
        assert np.allclose(curve.entropy_diff, 0.0)
        assert np.allclose(curve.heat_diff, 0.0)
        assert np.all(curve.certified)
        thermo_service.logger.warning.assert_not_called()

    def test_noncontracting_alpha_flags_rows(self, thermo_service, constant_model):
        """Test that alpha >= 1 leaves every row uncertified and logs a warning."""
        # Arrange
        temps = np.array([0.009, 0.010, 0.011, 0.012, 0.013, 0.014, 0.015])
        surface = self._surface(temps, constant_model.rule.size)

        # Act
        curve = thermo_service.potential_curve(surface, constant_model, 0.015, 0.009, 4.8)

        # Assert
        assert not np.any(curve.certified)
        assert np.all(np.isfinite(curve.psi_error))
        thermo_service.logger.warning.assert_called_once()
        assert "contraction constant" in thermo_service.logger.warning.call_args.args[0]
