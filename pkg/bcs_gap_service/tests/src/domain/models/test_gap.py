import numpy as np
import pytest

from bcs_gap_service.src.core.exceptions import MissingTemperatures
from bcs_gap_service.src.domain.models.gap import BoundKind, GapSurface, SolveReport, WindowCertificate


def make_report(temperature: float) -> SolveReport:
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


class TestGapSurface:
    """Test cases for GapSurface lookups."""

    @pytest.fixture
    def surface(self):
        temps = np.array([0.01, 0.015, 0.02])
        values = np.array([[3.0, 3.0], [2.0, 2.0], [0.0, 0.0]])
        return GapSurface(
            temps=temps,
            nodes=np.array([0.1, 0.5]),
            values=values,
            reports=[make_report(t) for t in temps]
        )

    def test_row_at_exact_temperature(self, surface):
        """Test row lookup on a grid temperature."""
        # Act & Assert
        assert surface.row_at(0.015).tolist() == [2.0, 2.0]

    def test_row_at_tolerates_roundoff(self, surface):
        """Test that lookups tolerate relative roundoff."""
        # Act & Assert
        assert surface.index_of(0.02 * (1.0 + 1e-12)) == 2

    def test_missing_temperature(self, surface):
        """Test that an off-grid temperature raises MissingTemperatures."""
        # Act & Assert
        with pytest.raises(MissingTemperatures):
            surface.row_at(0.0175)


class TestWindowCertificate:
    """Test cases for WindowCertificate coverage."""

    def test_covers_inside_window(self):
        """Test that certified windows cover [tau, T_c]."""
        # Arrange
        window = WindowCertificate(tau=0.5, alpha=0.9, alpha_max=0.95, certified=True)

        # Act & Assert
        assert window.covers(0.5, 1.0)
        assert window.covers(1.0, 1.0)
        assert not window.covers(0.4, 1.0)
        assert not window.covers(1.1, 1.0)

    def test_uncertified_covers_nothing(self):
        """Test that an uncertified window covers no temperature."""
        # Arrange
        window = WindowCertificate(tau=0.5, alpha=1.1, alpha_max=0.95, certified=False)

        # Act & Assert
        assert not window.covers(0.8, 1.0)
