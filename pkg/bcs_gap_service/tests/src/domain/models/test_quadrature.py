import numpy as np
import pytest

from bcs_gap_service.src.core.exceptions import LengthMismatch


class TestQuadratureRule:
    """Test cases for QuadratureRule."""

    def test_arrays_are_read_only(self, small_rule):
        """Test that nodes and weights cannot be modified."""
        # Act & Assert
        with pytest.raises(ValueError, match="read-only"):
            small_rule.nodes[0] = 0.5

    def test_integrate_is_linear(self, small_rule, rng):
        """Test linearity of integrate."""
        # Arrange
        first = rng.normal(size=small_rule.size)
        second = rng.normal(size=small_rule.size)

        # Act
        combined = small_rule.integrate(2.0 * first - 3.0 * second)

        # Assert
        assert combined == pytest.approx(2.0 * small_rule.integrate(first) - 3.0 * small_rule.integrate(second))

    def test_integrate_zero(self, small_rule):
        """Test that all-zero samples integrate to zero."""
        # Act & Assert
        assert small_rule.integrate(np.zeros(small_rule.size)) == 0.0

    def test_integrate_rows(self, small_rule):
        """Test that a 2-D input is integrated row by row."""
        # Arrange
        samples = np.vstack([np.ones(small_rule.size), small_rule.nodes])

        # Act
        result = small_rule.integrate(samples)

        # Assert
        assert result.shape == (2,)
        assert result[0] == pytest.approx(0.99, rel=1e-12)
        assert result[1] == pytest.approx((1.0 - 0.01**2) / 2.0, rel=1e-12)

    @pytest.mark.parametrize("samples", [np.ones(3), np.float64(1.0)])
    def test_length_mismatch(self, small_rule, samples):
        """Test that a wrong sample count raises LengthMismatch."""
        # Act & Assert
        with pytest.raises(LengthMismatch):
            small_rule.integrate(samples)
