"""Property suites run by ``pdrqa verify``.

Each suite takes the word to analyse as an argument so a corrupted sequence
can be fed in; every failure carries one concrete counterexample.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from . import oracle
from .pdseq import pd_prefix
from .rplines import diagonal_histogram, reference_scan, vertical_histogram


@dataclass
class Counterexample:
    i: Optional[int]
    j: Optional[int]
    length: Optional[int]
    n: int
    m: int
    detail: str = ""

    def __str__(self):
        return (f"i={self.i} j={self.j} length={self.length} n={self.n} m={self.m}"
                + (f" ({self.detail})" if self.detail else ""))


@dataclass
class SuiteResult:
    name: str
    ok: bool
    seconds: float
    counterexample: Optional[Counterexample] = None


def line_start_grid(word, grid: int = 512, scan_n: Optional[int] = None
                  ) -> Optional[Counterexample]:
    """Arithmetic start-point sets vs. brute force on ``[1, grid]^2``, lengths ``<= grid``.

    The scan covers ``RP(scan_n)`` with ``scan_n > 2 * grid`` so that every line
    starting in the grid with length ``<= grid`` is seen un-truncated.
    """
    scan_n = 2 * grid + 176 if scan_n is None else scan_n
    if scan_n <= 2 * grid:
        raise ValueError("scan_n must exceed 2 * grid")
    lines = reference_scan(word, scan_n, 1)
    by_length = {}
    for line in lines:
        if line.i <= grid and line.j <= grid and line.length <= grid:
            by_length.setdefault(line.length, []).append((line.i - 1, line.j - 1))
    empty = np.zeros((grid, grid), dtype=bool)
    for length in range(1, grid + 1):
        ref = empty.copy()
        if length in by_length:
            ref[tuple(np.array(by_length[length]).T)] = True
        predicted = oracle.line_start_mask(length, grid)
        diff = np.argwhere(ref != predicted)
        if diff.size:
            i, j = (int(v) + 1 for v in diff[0])
            what = "missing from oracle" if ref[i - 1, j - 1] else "not in scan"
            return Counterexample(i, j, length, scan_n, 1, what)
    # the scalar predicate on every observed start point
    for length, pts in by_length.items():
        for i, j in pts:
            if not oracle.is_line_start(i + 1, j + 1, length):
                return Counterexample(i + 1, j + 1, length, scan_n, 1,
                                      "is_line_start rejects a scanned line")
    return None


def allowed_lengths(word, n: int = 2 ** 13) -> Optional[Counterexample]:
    """Every non-truncated line length in ``RP(n)`` is ``2**(k+1)-1`` or ``3*2**k-1``."""
    hist = diagonal_histogram(word, n, 1, exclude_truncated=True)
    for length in hist.lengths():
        if not oracle.is_allowed_length(length):
            return Counterexample(None, None, length, n, 1, "disallowed length")
    return None


def vertical_lines(word, n: int = 2 ** 12) -> Optional[Counterexample]:
    """Vertical lines have length 1 or 3 for m = 1 and length 1 for m = 3.

    Runs cut off by the bottom edge of the finite plot are excluded.
    """
    for m, allowed in ((1, {1, 3}), (3, {1})):
        hist = vertical_histogram(word, n, m, exclude_truncated=True)
        for length in hist.lengths():
            if length not in allowed:
                return Counterexample(None, None, length, n, m, "vertical length")
    return None


def embedding_shift(word, sizes=(16, 33, 64, 100, 128), max_m: int = 4
                    ) -> Optional[Counterexample]:
    """Lines of ``RP^m(n)`` are the lines of ``RP^1(n+m-1)`` of length ``>= m``, shortened by ``m-1``."""
    for n in sizes:
        for m in range(2, max_m + 1):
            lhs = reference_scan(word, n, m)
            rhs = {(l.i, l.j, l.length - m + 1)
                   for l in reference_scan(word, n + m - 1, 1) if l.length >= m}
            for line in lhs:
                if (line.i, line.j, line.length) not in rhs:
                    return Counterexample(line.i, line.j, line.length, n, m,
                                          "no matching m=1 line")
            if len(lhs) != len(rhs):
                return Counterexample(None, None, None, n, m, "line counts differ")
    return None


SUITES: List[tuple[str, Callable]] = [
    ("line_starts", line_start_grid),
    ("allowed_lengths", allowed_lengths),
    ("vertical", vertical_lines),
    ("embedding_shift", embedding_shift),
]


def run_suites(word=None, grid: int = 512) -> List[SuiteResult]:
    """Run every suite, stopping at the first failure."""
    if word is None:
        word = pd_prefix(max(2 * grid + 176, 2 ** 13 + 8))
    results = []
    for name, suite in SUITES:
        t0 = time.perf_counter()
        if name == "line_starts":
            ce = suite(word, grid=grid)
        else:
            ce = suite(word)
        results.append(SuiteResult(name, ce is None, time.perf_counter() - t0, ce))
        if ce is not None:
            break
    return results
