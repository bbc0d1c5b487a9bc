import json

import pytest
from click.testing import CliRunner

from bcs_gap_service.main import cli


@pytest.fixture
def runner(tmp_path, monkeypatch):
    """Provides a CLI runner that keeps log files inside the temporary directory."""
    monkeypatch.setenv("BCS_GAP_LOG_DIR", str(tmp_path / "logs"))
    return CliRunner()


@pytest.fixture
def config_file(tmp_path, run_config_data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(run_config_data), encoding="utf-8")
    return path


def _invoke(runner, command, config_path, out_dir, *extra):
    return runner.invoke(cli, [command, "--config", str(config_path), "--out", str(out_dir), "--quiet", *extra])


class TestCli:
    """Test cases for the command-line interface."""

    def test_simple(self, runner, config_file, tmp_path):
        """Test that simple exits 0 and writes both curves."""
        # Act
        result = _invoke(runner, "simple", config_file, tmp_path / "out")

        # Assert
        assert result.exit_code == 0
        assert (tmp_path / "out" / "gap_curve_low.csv").exists()
        assert (tmp_path / "out" / "simple_summary.json").exists()

    def test_simple_is_deterministic(self, runner, config_file, tmp_path):
        """Test that two runs give identical tables and identical documents up to the timestamp."""
        # Act
        _invoke(runner, "simple", config_file, tmp_path / "first")
        _invoke(runner, "simple", config_file, tmp_path / "second")

        # Assert
        for name in ("gap_curve_low.csv", "gap_curve_high.csv"):
            assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()
        first, second = (
            json.loads((tmp_path / folder / "simple_summary.json").read_text(encoding="utf-8"))
            for folder in ("first", "second")
        )
        del first["metadata"]["generated_at"], second["metadata"]["generated_at"]
        assert first == second

    def test_solve_without_certified_window(self, runner, config_file, tmp_path):
        """Test that solve exits 3 when the window cannot be certified."""
        # Act
        result = _invoke(runner, "solve", config_file, tmp_path / "out")

        # Assert
        assert result.exit_code == 3
        assert "NoCertifiedWindow" in result.output

    def test_solve_uncertified(self, runner, config_file, tmp_path):
        """Test that solve --uncertified completes and writes the critical data."""
        # Act
        result = _invoke(runner, "solve", config_file, tmp_path / "out", "--uncertified")

        # Assert
        assert result.exit_code == 0
        critical = json.loads((tmp_path / "out" / "critical.json").read_text(encoding="utf-8"))
        assert critical["certified"] is False

    def test_invalid_config(self, runner, tmp_path):
        """Test that an unreadable configuration exits 2."""
        # Arrange
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")

        # Act
        result = _invoke(runner, "simple", path, tmp_path / "out")

        # Assert
        assert result.exit_code == 2

    def test_verify_kernel_on_band_edge(self, runner, run_config_data, tmp_path):
        """Test that verify exits 1 when the kernel touches the coupling bound."""
        # Arrange
        run_config_data["kernel"] = {"kind": "constant", "value": 0.26}
        path = tmp_path / "edge.json"
        path.write_text(json.dumps(run_config_data), encoding="utf-8")

        # Act
        result = _invoke(runner, "verify", path, tmp_path / "out")

        # Assert
        assert result.exit_code == 1
        assert "FAIL model.validation" in result.output
        assert (tmp_path / "out" / "verify_report.json").exists()

    def test_verify_is_deterministic(self, runner, config_file, tmp_path):
        """Test that two verify runs with the same seed write the same report up to the timestamp."""
        # Act
        results = [_invoke(runner, "verify", config_file, tmp_path / folder) for folder in ("first", "second")]

        # Assert
        assert [result.exit_code for result in results] == [0, 0]
        first, second = (
            json.loads((tmp_path / folder / "verify_report.json").read_text(encoding="utf-8"))
            for folder in ("first", "second")
        )
        del first["metadata"]["generated_at"], second["metadata"]["generated_at"]
        assert first == second
