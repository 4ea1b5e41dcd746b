"""
Diagonal and vertical line histograms of symbolic recurrence plots.

For a word ``x`` the plot ``RP^m(n)`` is the ``n x n`` 0/1 matrix with
``R[i, j] = 1`` iff the m-grams ``x_i..x_{i+m-1}`` and ``x_j..x_{j+m-1}``
coincide (1-based).  A diagonal line is a maximal run of ones parallel to the
main diagonal, the main diagonal itself excluded.  Lines that run into the
right/bottom edge of the plot are counted at their truncated length, and a
line and its transpose are two lines.

:func:`diagonal_histogram` scans one diagonal offset at a time and keeps only
``O(n)`` working memory.  :func:`reference_scan` builds the whole matrix and
enumerates start points from the definition; it is the slow oracle.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple

import numpy as np

from .pdseq import WordLike, as_word


@dataclass(frozen=True)
class LineHistogram:
    """Exact counts of lines per length in ``RP^m(n)``."""

    n: int
    m: int
    counts: Dict[int, int] = field(default_factory=dict)
    kind: str = "diagonal"

    def __post_init__(self):
        if self.kind not in ("diagonal", "vertical"):
            raise ValueError(f"unknown histogram kind {self.kind!r}")
        clean = {int(k): int(v) for k, v in sorted(self.counts.items()) if v}
        for length in clean:
            if not 1 <= length <= self.n:
                raise ValueError(f"line length {length} outside [1, {self.n}]")
        object.__setattr__(self, "counts", clean)

    def __getitem__(self, length: int) -> int:
        return self.counts.get(length, 0)

    def lengths(self) -> List[int]:
        return list(self.counts)

    @property
    def total_lines(self) -> int:
        return sum(self.counts.values())

    @property
    def recurrences(self) -> int:
        """Number of recurrent cells covered by the lines."""
        return sum(length * c for length, c in self.counts.items())

    def at_least(self, length: int) -> int:
        """``NLINESS``: number of lines of length ``>= length``."""
        return sum(c for l, c in self.counts.items() if l >= length)


class StartPoint(NamedTuple):
    i: int
    j: int
    length: int


def _check_args(x: np.ndarray, n: int, m: int) -> None:
    if n < 2:
        raise ValueError(f"plot size n must be >= 2, got {n}")
    if m < 1:
        raise ValueError(f"embedding dimension m must be >= 1, got {m}")
    if x.size < n + m - 1:
        raise ValueError(
            f"word of length {x.size} too short for n={n}, m={m} "
            f"(need {n + m - 1})")


def mgram_ids(x: WordLike, count: int, m: int) -> np.ndarray:
    """Integer label per position ``1..count``; equal labels iff equal m-grams."""
    x = np.asarray(as_word(x))
    windows = np.lib.stride_tricks.sliding_window_view(x[:count + m - 1], m)
    # one opaque m-byte value per row makes unique() a plain 1-d sort
    rows = np.ascontiguousarray(windows).view(np.dtype((np.void, m))).ravel()
    _, inverse = np.unique(rows, return_inverse=True)
    return inverse.reshape(-1).astype(np.int64)


def _run_bounds(mask: np.ndarray):
    """Half-open ``[start, stop)`` bounds of the runs of ``True`` in ``mask``."""
    padded = np.empty(mask.size + 2, dtype=np.int8)
    padded[0] = padded[-1] = 0
    padded[1:-1] = mask
    edges = np.flatnonzero(np.diff(padded))
    return edges[0::2], edges[1::2]


def _scan_offsets(x: np.ndarray, n: int, m: int, offsets: range,
                  exclude_truncated: bool) -> np.ndarray:
    acc = np.zeros(n + 1, dtype=np.int64)
    span = n + m - 1
    for delta in offsets:
        eq = x[:span - delta] == x[delta:span]
        if m == 1:
            rec = eq
        else:
            # m-grams at (t, t+delta) agree iff no mismatch in eq[t:t+m]
            bad = np.zeros(eq.size + 1, dtype=np.int64)
            np.cumsum(~eq, out=bad[1:])
            rec = bad[m:m + n - delta] == bad[:n - delta]
        starts, stops = _run_bounds(rec)
        if exclude_truncated and stops.size and stops[-1] == rec.size:
            starts, stops = starts[:-1], stops[:-1]
        if stops.size:
            acc += np.bincount(stops - starts, minlength=n + 1)[:n + 1]
    return acc


def diagonal_histogram(x: WordLike, n: int, m: int = 1, *, threads: int = 1,
                       exclude_truncated: bool = False) -> LineHistogram:
    """
    Count the maximal diagonal lines of ``RP^m(n)`` by exact length.

    Parameters
    ----------
    x : word
        Symbols ``x_1 ...``; needs at least ``n + m - 1`` of them.
    n : int
        Plot size, ``n >= 2``.
    m : int
        Embedding dimension.
    threads : int
        Diagonal offsets are split into contiguous chunks scanned in
        parallel; the integer histograms are summed in chunk order.
    exclude_truncated : bool
        Drop lines that run into the last row/column of the plot, keeping
        only lines whose end point is followed by a non-recurrence.

    Returns
    -------
    LineHistogram
        Upper and lower triangles are both counted.
    """
    x = np.asarray(as_word(x))
    _check_args(x, n, m)
    offsets = range(1, n)
    if threads <= 1 or n < 64:
        acc = _scan_offsets(x, n, m, offsets, exclude_truncated)
    else:
        bounds = np.linspace(1, n, threads + 1).astype(int)
        chunks = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda r: _scan_offsets(x, n, m, r, exclude_truncated), chunks))
        acc = np.zeros(n + 1, dtype=np.int64)
        for part in parts:
            acc += part
    counts = {int(l): 2 * int(c) for l, c in enumerate(acc) if c}
    return LineHistogram(n, m, counts, "diagonal")


def vertical_histogram(x: WordLike, n: int, m: int = 1, *,
                       exclude_truncated: bool = False) -> LineHistogram:
    """
    Count maximal vertical runs ``R[i, j] = ... = R[i+l-1, j] = 1`` per column.

    Runs are taken over all rows, so a run may pass through the always
    recurrent main-diagonal cell ``(j, j)``.  Runs reaching row ``n`` are
    counted at their truncated length unless ``exclude_truncated`` is set;
    then they are kept only if ``x`` is long enough to show that row
    ``n + 1`` is not recurrent.
    """
    x = np.asarray(as_word(x))
    _check_args(x, n, m)
    have_next = x.size >= n + m
    ids = mgram_ids(x, n + 1 if have_next else n, m)
    rows = ids[:n]
    labels, multiplicity = np.unique(rows, return_counts=True)
    acc: Dict[int, int] = {}
    # columns with equal m-grams are identical, so scan one per label
    for label, mult in zip(labels.tolist(), multiplicity.tolist()):
        mask = rows == label
        starts, stops = _run_bounds(mask)
        lengths = stops - starts
        if exclude_truncated and stops.size and stops[-1] == n:
            if not (have_next and ids[n] != label):
                lengths = lengths[:-1]
        for l, c in zip(*np.unique(lengths, return_counts=True)):
            acc[int(l)] = acc.get(int(l), 0) + mult * int(c)
    return LineHistogram(n, m, acc, "vertical")


def lmax(hist: LineHistogram) -> int:
    """Longest line length present, 0 for an empty histogram."""
    return max(hist.counts, default=0)


def recurrence_matrix(x: WordLike, n: int, m: int = 1) -> np.ndarray:
    """Dense boolean ``RP^m(n)`` (0-based indices)."""
    x = np.asarray(as_word(x))
    _check_args(x, n, m)
    ids = mgram_ids(x, n, m)
    return ids[:, None] == ids[None, :]


def reference_scan(x: WordLike, n: int, m: int = 1) -> List[StartPoint]:
    """
    Enumerate every maximal diagonal line of ``RP^m(n)`` from the definition.

    Quadratic in time and memory; meant for ``n`` up to a few thousand.
    """
    R = recurrence_matrix(x, n, m)
    prev = np.zeros_like(R)
    prev[1:, 1:] = R[:-1, :-1]
    starts = R & ~prev
    np.fill_diagonal(starts, False)
    rows = R.tolist()
    out = []
    for i0, j0 in np.argwhere(starts).tolist():
        length = 1
        i, j = i0 + 1, j0 + 1
        while i < n and j < n and rows[i][j]:
            length += 1
            i += 1
            j += 1
        out.append(StartPoint(i0 + 1, j0 + 1, length))
    return out


def histogram_of(lines: List[StartPoint], n: int, m: int = 1) -> LineHistogram:
    counts: Dict[int, int] = {}
    for line in lines:
        counts[line.length] = counts.get(line.length, 0) + 1
    return LineHistogram(n, m, counts, "diagonal")


def is_truncated(line: StartPoint, n: int) -> bool:
    """True if the line runs into the last row or column of ``RP(n)``."""
    return max(line.i, line.j) + line.length > n


def is_interior(line: StartPoint, n: int) -> bool:
    """Starts off the first row/column and ends strictly inside the plot."""
    return min(line.i, line.j) >= 2 and not is_truncated(line, n)


def offdiagonal_recurrences(x: WordLike, n: int, m: int = 1) -> int:
    """Number of pairs ``i != j <= n`` with equal m-grams, by counting m-grams."""
    x = np.asarray(as_word(x))
    _check_args(x, n, m)
    _, mult = np.unique(mgram_ids(x, n, m), return_counts=True)
    mult = mult.astype(object)
    return int(sum(c * (c - 1) for c in mult))
