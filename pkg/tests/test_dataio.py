import numpy as np
import pytest

from offsettree.core import PartialLabelExample
from offsettree.dataio import (
    BanditLog,
    DataFormatError,
    MulticlassDataset,
    read_bandit_log,
    read_multiclass,
    write_bandit_log,
    write_multiclass,
)


def small_dataset():
    X = np.array([[0.5, -1.25], [2.0, 0.0], [1e-3, 3.5]])
    y = np.array([1, 3, 2])
    return MulticlassDataset(X, y, 3)


class TestMulticlassDataset:
    def test_basic_fields(self):
        ds = small_dataset()
        assert len(ds) == 3
        assert ds.d == 2
        assert ds.k == 3

    def test_features_are_read_only(self):
        ds = small_dataset()
        with pytest.raises(ValueError):
            ds.xs[0, 0] = 9.0

    def test_validation(self):
        with pytest.raises(ValueError):
            MulticlassDataset(np.zeros(3), np.ones(3, dtype=int), 2)
        with pytest.raises(ValueError):
            MulticlassDataset(np.zeros((3, 1)), np.ones(2, dtype=int), 2)
        with pytest.raises(ValueError):
            MulticlassDataset(np.zeros((0, 1)), np.zeros(0, dtype=int), 2)
        with pytest.raises(ValueError):
            MulticlassDataset(np.full((2, 1), np.nan), np.ones(2, dtype=int), 2)
        with pytest.raises(ValueError):
            MulticlassDataset(np.zeros((2, 1)), np.array([1, 4]), 3)
        with pytest.raises(ValueError):
            MulticlassDataset(np.zeros((2, 1)), np.array([1, 1]), 1)


class TestMulticlassIO:
    def test_round_trip(self, tmp_path):
        ds = small_dataset()
        p = tmp_path / "data.txt"
        write_multiclass(p, ds)
        back = read_multiclass(p)
        assert np.array_equal(back.xs, ds.xs)
        assert np.array_equal(back.labels, ds.labels)
        assert back.k == ds.k

    def test_repr_floats_survive_exactly(self, tmp_path):
        X = np.array([[0.1 + 0.2], [1.0 / 3.0]])
        ds = MulticlassDataset(X, np.array([1, 2]), 2)
        p = tmp_path / "data.txt"
        write_multiclass(p, ds)
        assert np.array_equal(read_multiclass(p).xs, X)

    def test_header_errors_carry_line_numbers(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("")
        with pytest.raises(DataFormatError, match="bad.txt:1"):
            read_multiclass(p)
        p.write_text("2\n")
        with pytest.raises(DataFormatError, match="header"):
            read_multiclass(p)
        p.write_text("x y\n")
        with pytest.raises(DataFormatError, match="two integers"):
            read_multiclass(p)
        p.write_text("2 1\n")
        with pytest.raises(DataFormatError, match="k >= 2"):
            read_multiclass(p)

    def test_row_errors_carry_line_numbers(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("2 3\n0.0 0.0 1\n0.0 2\n")
        with pytest.raises(DataFormatError, match="bad.txt:3"):
            read_multiclass(p)
        p.write_text("2 3\n0.0 0.0 7\n")
        with pytest.raises(DataFormatError, match="outside 1..3"):
            read_multiclass(p)
        p.write_text("2 3\n0.0 oops 1\n")
        with pytest.raises(DataFormatError, match="bad.txt:2"):
            read_multiclass(p)

    def test_no_data_rows(self, tmp_path):
        p = tmp_path / "empty.txt"
        p.write_text("2 3\n")
        with pytest.raises(DataFormatError, match="no data rows"):
            read_multiclass(p)

    def test_blank_lines_are_skipped(self, tmp_path):
        p = tmp_path / "data.txt"
        p.write_text("2 2\n\n0.0 1.0 1\n\n\n1.0 0.0 2\n")
        ds = read_multiclass(p)
        assert len(ds) == 2
        assert ds.labels.tolist() == [1, 2]


class TestBanditLogIO:
    def log_examples(self):
        return [
            PartialLabelExample((0.25, -1.0), 2, 1.0, 3),
            PartialLabelExample((0.5, 2.0), 1, 0.25, 3, (0.2, 0.3, 0.5)),
        ]

    def test_round_trip(self, tmp_path):
        p = tmp_path / "log.txt"
        write_bandit_log(p, self.log_examples())
        log = read_bandit_log(p)
        assert isinstance(log, BanditLog)
        assert log.d == 2 and log.k == 3
        assert len(log.examples) == 2
        e0, e1 = log.examples
        assert e0.propensities is None
        assert e0.action == 2 and e0.reward == 1.0
        assert np.allclose(e1.propensities, [0.2, 0.3, 0.5])
        assert np.array_equal(e1.x, [0.5, 2.0])

    def test_write_refuses_empty_and_mixed(self, tmp_path):
        p = tmp_path / "log.txt"
        with pytest.raises(ValueError):
            write_bandit_log(p, [])
        mixed = [PartialLabelExample((0.0,), 1, 1.0, 2),
                 PartialLabelExample((0.0, 1.0), 1, 1.0, 2)]
        with pytest.raises(ValueError):
            write_bandit_log(p, mixed)

    def test_column_count_errors(self, tmp_path):
        p = tmp_path / "log.txt"
        p.write_text("2 3\n0.0 1.0 2 1.0\n")
        with pytest.raises(DataFormatError, match="log.txt:2"):
            read_bandit_log(p)

    def test_bad_values_are_wrapped_with_line_numbers(self, tmp_path):
        p = tmp_path / "log.txt"
        # reward outside [0, 1] fails example validation, reported per line
        p.write_text("1 2\n0.0 1 2.5 uniform\n")
        with pytest.raises(DataFormatError, match="log.txt:2"):
            read_bandit_log(p)
        # propensities that do not sum to 1
        p.write_text("1 2\n0.0 1 1.0 0.9 0.9\n")
        with pytest.raises(DataFormatError, match="log.txt:2"):
            read_bandit_log(p)

    def test_no_data_rows(self, tmp_path):
        p = tmp_path / "log.txt"
        p.write_text("1 2\n")
        with pytest.raises(DataFormatError, match="no data rows"):
            read_bandit_log(p)
