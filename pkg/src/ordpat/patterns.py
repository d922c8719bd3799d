"""Ordinal-pattern extraction, encoding, and frequency estimation.

A window of m values is summarised by its rank tuple: position j gets rank
r iff x_j is the r-th smallest value in the window (equal values are ranked
by position, earlier index first).  Rank tuples are encoded as their
lexicographic index, 0-based, so for m = 3

    0 (1,2,3)   1 (1,3,2)   2 (2,1,3)   3 (2,3,1)   4 (3,1,2)   5 (3,2,1).

All functions use this encoding.  Pattern order is capped at MAX_ORDER = 8
(factorial growth makes frequency vectors impractical beyond that).
"""

from __future__ import annotations

import csv
from math import factorial

import numpy as np

from .errors import InsufficientDataError

MAX_ORDER = 8

__all__ = [
    "MAX_ORDER",
    "pattern_of",
    "lex_rank",
    "lex_unrank",
    "pattern_series",
    "relative_frequencies",
    "one_hot",
    "one_hot_series",
    "read_series_text",
    "write_series_text",
    "read_series_csv",
    "read_pattern_file",
    "write_pattern_file",
]


def _check_order(m: int) -> int:
    m = int(m)
    if m < 2 or m > MAX_ORDER:
        raise ValueError(f"pattern order must be in [2, {MAX_ORDER}], got {m}")
    return m


def lex_rank(perm) -> int:
    """Lexicographic index (0-based) of a rank tuple over 1..m."""
    perm = tuple(int(v) for v in perm)
    m = len(perm)
    _check_order(m)
    if sorted(perm) != list(range(1, m + 1)):
        raise ValueError(f"not a permutation of 1..{m}: {perm}")
    rank = 0
    for j in range(m - 1):
        smaller_after = sum(1 for k in range(j + 1, m) if perm[k] < perm[j])
        rank += smaller_after * factorial(m - 1 - j)
    return rank


def lex_unrank(index: int, m: int) -> tuple[int, ...]:
    """Rank tuple at lexicographic index; inverse of lex_rank."""
    m = _check_order(m)
    index = int(index)
    if not 0 <= index < factorial(m):
        raise ValueError(f"pattern index {index} out of range for m={m}")
    remaining = list(range(1, m + 1))
    out = []
    for j in range(m):
        f = factorial(m - 1 - j)
        digit, index = divmod(index, f)
        out.append(remaining.pop(digit))
    return tuple(out)


def pattern_of(window) -> int:
    """Pattern id of one length-m window (m = len(window) >= 2).

    Equal values are ordered by position, the earlier index ranking lower.
    """
    x = np.asarray(window, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("window must be a 1-d vector of length >= 2")
    _check_order(x.size)
    if not np.all(np.isfinite(x)):
        raise ValueError("window contains a non-finite value")
    m = x.size
    rank = 0
    for j in range(m - 1):
        # strict < leaves ties to the later index, i.e. the positional rule
        rank += int(np.sum(x[j + 1 :] < x[j])) * factorial(m - 1 - j)
    return rank


def pattern_series(values, m: int) -> np.ndarray:
    """Pattern ids of all sliding length-m windows of a series.

    Returns an int64 array of length T - m + 1.

    Raises
    ------
    InsufficientDataError
        If the series is shorter than m.
    """
    m = _check_order(m)
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise ValueError("series must be 1-dimensional")
    if not np.all(np.isfinite(x)):
        raise ValueError("series contains a non-finite value")
    if x.size < m:
        raise InsufficientDataError(f"need at least m={m} values, got {x.size}")
    n = x.size - m + 1
    ids = np.zeros(n, dtype=np.int64)
    for j in range(m - 1):
        smaller_after = np.zeros(n, dtype=np.int64)
        for k in range(j + 1, m):
            smaller_after += x[k : k + n] < x[j : j + n]
        ids += smaller_after * factorial(m - 1 - j)
    return ids


def _pattern_series_batch(values: np.ndarray, m: int) -> np.ndarray:
    """pattern_series applied row-wise to a (reps, T) array; internal helper."""
    m = _check_order(m)
    x = np.asarray(values, dtype=float)
    if x.ndim != 2 or x.shape[1] < m:
        raise InsufficientDataError(f"need rows of at least m={m} values")
    n = x.shape[1] - m + 1
    ids = np.zeros((x.shape[0], n), dtype=np.int64)
    for j in range(m - 1):
        smaller_after = np.zeros((x.shape[0], n), dtype=np.int64)
        for k in range(j + 1, m):
            smaller_after += x[:, k : k + n] < x[:, j : j + n]
        ids += smaller_after * factorial(m - 1 - j)
    return ids


def relative_frequencies(patterns, m: int) -> np.ndarray:
    """Relative frequency of each of the m! patterns in a pattern series."""
    m = _check_order(m)
    pats = np.asarray(patterns, dtype=np.int64)
    if pats.size == 0:
        raise InsufficientDataError("empty pattern series")
    d = factorial(m)
    if pats.min() < 0 or pats.max() >= d:
        raise ValueError(f"pattern id out of range 0..{d - 1}")
    return np.bincount(pats, minlength=d) / pats.size


def one_hot(index: int, m: int) -> np.ndarray:
    """Binary indicator vector of length m! with a single 1 at `index`."""
    m = _check_order(m)
    d = factorial(m)
    index = int(index)
    if not 0 <= index < d:
        raise ValueError(f"pattern index {index} out of range for m={m}")
    v = np.zeros(d)
    v[index] = 1.0
    return v


def one_hot_series(patterns, m: int) -> np.ndarray:
    """Stack of one-hot rows, shape (n, m!); its column mean is the frequency vector."""
    m = _check_order(m)
    pats = np.asarray(patterns, dtype=np.int64)
    d = factorial(m)
    if pats.size and (pats.min() < 0 or pats.max() >= d):
        raise ValueError(f"pattern id out of range 0..{d - 1}")
    out = np.zeros((pats.size, d))
    out[np.arange(pats.size), pats] = 1.0
    return out


# ---------------------------------------------------------------------------
# text formats: series files (one decimal per line, '#' comments) and
# pattern files (header "#ordpat m=<m>", one id per line)
# ---------------------------------------------------------------------------


def read_series_text(path) -> np.ndarray:
    """Read a plain-text series: one finite decimal per line, '#' comments skipped."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                v = float(line)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a decimal number: {line!r}") from None
            if not np.isfinite(v):
                raise ValueError(f"{path}:{lineno}: non-finite value {line!r}")
            values.append(v)
    return np.asarray(values, dtype=float)


def write_series_text(path, values) -> None:
    x = np.asarray(values, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        for v in x:
            fh.write(f"{float(v):.17g}\n")


def read_series_csv(path, column) -> np.ndarray:
    """Read one column of a CSV file, selected by header name or 0-based index."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: empty CSV file")
    header = rows[0]
    if isinstance(column, str):
        try:
            idx = header.index(column)
        except ValueError:
            raise ValueError(f"{path}: no column named {column!r} in {header}") from None
        body = rows[1:]
    else:
        idx = int(column)
        # accept a header row if the requested cell does not parse as a number
        body = rows
        try:
            float(rows[0][idx])
        except (ValueError, IndexError):
            body = rows[1:]
    values = []
    for lineno, row in enumerate(body, start=2 if body is not rows else 1):
        try:
            v = float(row[idx])
        except (ValueError, IndexError):
            raise ValueError(f"{path}:{lineno}: bad value in column {column!r}") from None
        if not np.isfinite(v):
            raise ValueError(f"{path}:{lineno}: non-finite value")
        values.append(v)
    if not values:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(values, dtype=float)


def write_pattern_file(path, patterns, m: int) -> None:
    m = _check_order(m)
    pats = np.asarray(patterns, dtype=np.int64)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#ordpat m={m}\n")
        for v in pats:
            fh.write(f"{int(v)}\n")


def read_pattern_file(path) -> tuple[np.ndarray, int]:
    """Read a pattern file; returns (ids, m)."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().strip()
        if not first.startswith("#ordpat"):
            raise ValueError(f"{path}:1: missing '#ordpat m=<m>' header")
        try:
            m = int(first.split("m=")[1])
        except (IndexError, ValueError):
            raise ValueError(f"{path}:1: malformed header {first!r}") from None
        _check_order(m)
        ids = []
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                ids.append(int(line))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a pattern id: {line!r}") from None
    pats = np.asarray(ids, dtype=np.int64)
    if pats.size and (pats.min() < 0 or pats.max() >= factorial(m)):
        raise ValueError(f"{path}: pattern id out of range for m={m}")
    return pats, m
