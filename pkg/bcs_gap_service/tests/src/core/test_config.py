import pytest
from pydantic import ValidationError

from bcs_gap_service.src.core.config import Settings


class TestSettings:
    """Test cases for application settings."""

    def test_defaults(self):
        """Test default settings values."""
        # Act
        settings = Settings()

        # Assert
        assert settings.app_name == "bcs_gap_service"
        assert settings.default_config_path == "configs/default.json"
        assert settings.max_concurrent_solves >= 1

    def test_log_level_is_normalized(self):
        """Test that the log level is upper-cased."""
        # Act
        settings = Settings(log_level="warning")

        # Assert
        assert settings.log_level == "WARNING"

    def test_unknown_log_level_rejected(self):
        """Test that an unknown log level fails validation."""
        # Act & Assert
        with pytest.raises(ValidationError):
            Settings(log_level="verbose")

    def test_concurrency_must_be_positive(self):
        """Test that max_concurrent_solves below one is rejected."""
        # Act & Assert
        with pytest.raises(ValidationError):
            Settings(max_concurrent_solves=0)

    def test_environment_override(self, monkeypatch):
        """Test that prefixed environment variables override defaults."""
        # Arrange
        monkeypatch.setenv("BCS_GAP_MAX_CONCURRENT_SOLVES", "7")

        # Act
        settings = Settings()

        # Assert
        assert settings.max_concurrent_solves == 7
