import json
from datetime import datetime, timezone

import numpy as np

from bcs_gap_service.src.domain.schemas.results import Metadata
from bcs_gap_service.src.infrastructure.storage.result_writer import FileResultWriter


class TestFileResultWriter:
    """Test cases for FileResultWriter."""

    def test_write_json(self, tmp_path, mock_logger):
        """Test that JSON documents are written with a trailing newline."""
        # Arrange
        writer = FileResultWriter(tmp_path / "out", ["json"], mock_logger)
        document = Metadata(app_name="app", command="solve", generated_at=datetime(2024, 1, 1, tzinfo=timezone.utc))

        # Act
        path = writer.write_json("meta.json", document)

        # Assert
        text = path.read_text(encoding="utf-8")
        assert text.endswith("\n")
        assert json.loads(text)["command"] == "solve"

    def test_write_csv_round_trips_doubles(self, tmp_path, mock_logger):
        """Test that CSV values keep full double precision."""
        # Arrange
        writer = FileResultWriter(tmp_path, ["csv"], mock_logger)
        values = np.array([0.1, 1.0 / 3.0, 2.0e-17])

        # Act
        path = writer.write_csv("table.csv", ["T", "delta"], [values, 2.0 * values])

        # Assert
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "T,delta"
        table = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.array_equal(table[:, 0], values)
        assert np.array_equal(table[:, 1], 2.0 * values)

    def test_skips_unconfigured_formats(self, tmp_path, mock_logger):
        """Test that formats outside the configuration are not written."""
        # Arrange
        writer = FileResultWriter(tmp_path, ["json"], mock_logger)

        # Act
        path = writer.write_csv("table.csv", ["T"], [np.ones(2)])

        # Assert
        assert path is None
        assert not (tmp_path / "table.csv").exists()
