"""Pattern extraction, encoding, frequencies, and file formats."""

import itertools

import numpy as np
import pytest

from ordpat import (
    InsufficientDataError,
    lex_rank,
    lex_unrank,
    one_hot,
    one_hot_series,
    pattern_of,
    pattern_series,
    read_pattern_file,
    read_series_csv,
    read_series_text,
    relative_frequencies,
    write_pattern_file,
    write_series_text,
)
from ordpat.patterns import _pattern_series_batch


class TestPatternOf:
    def test_basic_windows(self):
        assert pattern_of([1.2, 3.4, 2.5]) == 1  # rank tuple (1,3,2)
        assert pattern_of([1.0, 2.0, 3.0]) == 0
        assert pattern_of([3.0, 2.0, 1.0]) == 5

    def test_ties_resolved_by_position(self):
        # equal values: earlier index ranks lower, so (5,5,1) -> (2,3,1)
        assert pattern_of([5.0, 5.0, 1.0]) == lex_rank((2, 3, 1))
        assert pattern_of([2.0, 2.0]) == lex_rank((1, 2))
        assert pattern_of([1.0, 1.0, 1.0]) == lex_rank((1, 2, 3))

    def test_all_orderings_of_four_values_are_distinct(self):
        seen = {pattern_of(perm) for perm in itertools.permutations((1.0, 2.0, 3.0, 4.0))}
        assert seen == set(range(24))

    def test_rejects_bad_windows(self):
        with pytest.raises(ValueError):
            pattern_of([1.0])
        with pytest.raises(ValueError):
            pattern_of([1.0, np.nan, 2.0])
        with pytest.raises(ValueError):
            pattern_of([1.0, np.inf])

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            window = rng.standard_normal(4)
            ref = pattern_of(window)
            assert pattern_of(np.exp(window)) == ref
            assert pattern_of(3.0 * window + 7.0) == ref
            assert pattern_of(np.arctan(window)) == ref


class TestLexCoding:
    def test_table_values(self):
        # lexicographic order of the six m=3 rank tuples
        table = [(1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)]
        for i, perm in enumerate(table):
            assert lex_rank(perm) == i
            assert lex_unrank(i, 3) == perm

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
    def test_round_trip(self, m):
        for i, perm in enumerate(sorted(itertools.permutations(range(1, m + 1)))):
            assert lex_rank(perm) == i
            assert lex_unrank(i, m) == perm

    def test_rejects_invalid(self):
        with pytest.raises(ValueError):
            lex_rank((1, 1, 2))
        with pytest.raises(ValueError):
            lex_rank((0, 1, 2))
        with pytest.raises(ValueError):
            lex_unrank(6, 3)
        with pytest.raises(ValueError):
            lex_unrank(-1, 3)


class TestPatternSeries:
    def test_short_example(self):
        assert pattern_series([1, 2, 3, 2], 3).tolist() == [0, 1]

    def test_monotone_series(self):
        for m in (2, 3, 4):
            assert np.all(pattern_series(np.arange(20.0), m) == 0)

    def test_length_contract(self):
        rng = np.random.default_rng(2)
        for m in (2, 3, 5):
            x = rng.standard_normal(40)
            assert pattern_series(x, m).size == x.size - m + 1

    def test_matches_window_recompute(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal(10_000)
        ids = pattern_series(x, 3)
        probe = rng.integers(0, ids.size, size=200)
        for t in probe:
            assert ids[t] == pattern_of(x[t : t + 3])

    def test_batch_matches_rowwise(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((8, 60))
        batch = _pattern_series_batch(x, 3)
        for row in range(8):
            assert np.array_equal(batch[row], pattern_series(x[row], 3))

    def test_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            pattern_series([1.0, 2.0], 3)


class TestFrequencies:
    def test_counting(self):
        freqs = relative_frequencies([0, 0, 1, 5], 3)
        assert freqs.tolist() == [0.5, 0.25, 0.0, 0.0, 0.0, 0.25]

    def test_normalization_random(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            pats = rng.integers(0, 24, size=int(rng.integers(1, 400)))
            freqs = relative_frequencies(pats, 4)
            assert freqs.min() >= 0.0
            assert abs(freqs.sum() - 1.0) < 1e-12

    def test_iid_gaussian_near_uniform(self):
        rng = np.random.default_rng(6)
        freqs = relative_frequencies(pattern_series(rng.standard_normal(10**6), 3), 3)
        assert np.abs(freqs - 1.0 / 6).max() < 0.005

    def test_empty_rejected(self):
        with pytest.raises(InsufficientDataError):
            relative_frequencies([], 3)


class TestOneHot:
    def test_unit_vectors(self):
        assert one_hot(0, 3).tolist() == [1, 0, 0, 0, 0, 0]
        assert one_hot(5, 3).tolist() == [0, 0, 0, 0, 0, 1]
        with pytest.raises(ValueError):
            one_hot(6, 3)

    def test_mean_equals_frequencies(self):
        rng = np.random.default_rng(7)
        pats = pattern_series(rng.standard_normal(500), 3)
        stacked = one_hot_series(pats, 3)
        assert np.allclose(stacked.mean(axis=0), relative_frequencies(pats, 3), atol=1e-15)


class TestFileFormats:
    def test_series_round_trip(self, tmp_path):
        path = tmp_path / "series.txt"
        values = np.array([1.5, -2.25, 3.0e-7, 12345.6789])
        write_series_text(path, values)
        assert np.array_equal(read_series_text(path), values)

    def test_series_comments_and_errors(self, tmp_path):
        path = tmp_path / "series.txt"
        path.write_text("# header\n1.0\n\n2.0\n")
        assert read_series_text(path).tolist() == [1.0, 2.0]
        bad = tmp_path / "bad.txt"
        bad.write_text("1.0\nnot-a-number\n")
        with pytest.raises(ValueError, match="bad.txt:2"):
            read_series_text(bad)

    def test_csv_by_name_and_index(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("time,value\n0,1.5\n1,2.5\n2,-1.0\n")
        assert read_series_csv(path, "value").tolist() == [1.5, 2.5, -1.0]
        assert read_series_csv(path, 1).tolist() == [1.5, 2.5, -1.0]
        with pytest.raises(ValueError, match="no column"):
            read_series_csv(path, "missing")

    def test_pattern_file_round_trip(self, tmp_path):
        path = tmp_path / "pats.txt"
        pats = np.array([0, 3, 5, 1, 1])
        write_pattern_file(path, pats, 3)
        got, m = read_pattern_file(path)
        assert m == 3
        assert np.array_equal(got, pats)
        assert path.read_text().startswith("#ordpat m=3\n")

    def test_pattern_file_header_required(self, tmp_path):
        path = tmp_path / "pats.txt"
        path.write_text("0\n1\n")
        with pytest.raises(ValueError, match="header"):
            read_pattern_file(path)
