"""
Unit tests for the CSV interchange formats.
"""
import numpy as np
import pytest

from outliers.datasets import format_float, read_dataset, write_dataset, write_detections, write_diagnostics
from outliers.exceptions import DataFormatError
from outliers.simulation import sample_dataset
from .factories import ContaminationConfigFactory


@pytest.mark.unit
class TestDatasetFiles:
    """Test cases for dataset CSV reading and writing."""

    def test_header_and_labels(self, tmp_path):
        """Test the header names features f1..fp followed by label."""
        path = tmp_path / 'data.csv'
        write_dataset(path, np.array([[0.1, 2.0], [-3.5, 1e-300]]), np.array([0, 1]))
        lines = path.read_text().splitlines()
        assert lines == ['f1,f2,label', '0.1,2.0,0', '-3.5,1e-300,1']

    def test_simulated_dataset_reads_back_exactly(self, tmp_path):
        """Test shortest round-trip floats reproduce every bit."""
        dataset = sample_dataset(ContaminationConfigFactory(n=25, p=3))
        path = tmp_path / 'data.csv'
        write_dataset(path, dataset.data, dataset.labels)
        loaded = read_dataset(path)
        assert loaded.data.tobytes() == dataset.data.tobytes()
        np.testing.assert_array_equal(loaded.labels, dataset.labels)

    def test_unlabelled_dataset(self, tmp_path):
        """Test a file without a label column loads with labels None."""
        path = tmp_path / 'data.csv'
        path.write_text('f1,f2\n1,2\n3,4\n')
        loaded = read_dataset(path)
        assert loaded.labels is None
        np.testing.assert_array_equal(loaded.data, [[1.0, 2.0], [3.0, 4.0]])

    def test_blank_lines_skipped(self, tmp_path):
        """Test blank rows are ignored."""
        path = tmp_path / 'data.csv'
        path.write_text('f1,f2,label\n1,2,0\n\n3,4,1\n\n')
        assert read_dataset(path).data.shape == (2, 2)

    @pytest.mark.parametrize('content, line', [
        ('', 1),
        ('f1,f2\n', 2),
        ('f1,f2\n1,2\n3\n', 3),
        ('f1,f2\n1,abc\n', 2),
        ('f1,f2\n1,2\n3,nan\n', 3),
        ('f1,label\n1,0\n2,2\n', 3),
    ])
    def test_malformed_files(self, tmp_path, content, line):
        """Test malformed files raise DataFormatError naming the line."""
        path = tmp_path / 'bad.csv'
        path.write_text(content)
        with pytest.raises(DataFormatError) as excinfo:
            read_dataset(path)
        assert excinfo.value.line == line
        assert str(excinfo.value).startswith(f"line {line}: ")

    def test_missing_file(self, tmp_path):
        """Test a missing file surfaces as an OSError."""
        with pytest.raises(OSError):
            read_dataset(tmp_path / 'absent.csv')


@pytest.mark.unit
class TestDetectionFiles:
    """Test cases for the detection output format."""

    def test_detection_rows(self, tmp_path):
        """Test index, distance and label columns."""
        path = tmp_path / 'labels.csv'
        write_detections(path, np.array([0.5, 30.25]), np.array([0, 1]))
        assert path.read_text() == 'index,distance,label\n0,0.5,0\n1,30.25,1\n'

    def test_format_float_round_trips(self):
        """Test formatted floats parse back to the same value."""
        for value in (0.1, 1 / 3, -2.5e-17, 123456789.123):
            assert float(format_float(value)) == value

    def test_diagnostics_rows(self, tmp_path):
        """Test log-determinants, votes and scan scores in long form, degenerate entries as nan."""
        path = tmp_path / 'diag.csv'
        write_diagnostics(path, [1.5, None], np.array([2, 0, 1]), {3: -0.25, 2: None})
        assert path.read_text() == (
            'table,key,value\n'
            'log_det,0,1.5\nlog_det,1,nan\n'
            'votes,0,2\nvotes,1,0\nvotes,2,1\n'
            'scan,2,nan\nscan,3,-0.25\n'
        )

    def test_diagnostics_without_votes(self, tmp_path):
        """Test low-dimensional diagnostics hold only the log-determinants."""
        path = tmp_path / 'diag.csv'
        write_diagnostics(path, [0.75])
        assert path.read_text() == 'table,key,value\nlog_det,0,0.75\n'
