import numpy as np
import pytest

from pdrqa.oracle import is_allowed_length
from pdrqa.pdseq import pd_prefix
from pdrqa.rplines import (LineHistogram, StartPoint, diagonal_histogram, histogram_of,
                           is_interior, is_truncated, lmax, offdiagonal_recurrences,
                           recurrence_matrix, reference_scan, vertical_histogram)

from conftest import random_words


def constant_word(size):
    return np.zeros(size, dtype=np.uint8)


def test_prefix8_start_points():
    lines = reference_scan(pd_prefix(8), 8)
    assert StartPoint(3, 5, 1) in lines
    assert StartPoint(3, 4, 2) in lines
    assert diagonal_histogram(pd_prefix(8), 8) == histogram_of(lines, 8)


def test_prefix10_boundary_start():
    # x3 = x1 = 0 and x4 != x2
    assert StartPoint(3, 1, 1) in reference_scan(pd_prefix(10), 10)


def test_word_010():
    assert sorted(reference_scan("010", 3)) == [StartPoint(1, 3, 1), StartPoint(3, 1, 1)]


@pytest.mark.parametrize("n", range(2, 20))
def test_constant_word(n):
    # offset d carries one full line of length n - d, twice (both triangles)
    expected = {n - d: 2 for d in range(1, n)}
    hist = diagonal_histogram(constant_word(n), n)
    assert hist.counts == expected
    assert histogram_of(reference_scan(constant_word(n), n), n).counts == expected


def test_constant_word_n4():
    assert diagonal_histogram(constant_word(4), 4).counts == {1: 2, 2: 2, 3: 2}


def test_shift_m2_n8_interior():
    x = pd_prefix(16)
    n = 8
    m2 = [l for l in reference_scan(x, n, 2) if max(l.i, l.j) + l.length + 1 <= n]
    m1 = {l for l in reference_scan(x, n, 1) if max(l.i, l.j) + l.length <= n}
    assert m2
    for line in m2:
        assert StartPoint(line.i, line.j, line.length + 1) in m1


@pytest.mark.parametrize("n, m, size", [(1, 1, 5), (4, 1, 3), (4, 3, 5)])
def test_argument_errors(n, m, size):
    with pytest.raises(ValueError):
        diagonal_histogram(constant_word(size), n, m)
    with pytest.raises(ValueError):
        vertical_histogram(constant_word(size), n, m)


def test_histogram_validation():
    with pytest.raises(ValueError):
        LineHistogram(4, 1, {5: 1})
    with pytest.raises(ValueError):
        LineHistogram(4, 1, {1: 1}, kind="horizontal")
    assert LineHistogram(4, 1, {2: 0, 1: 3}).counts == {1: 3}


def test_lmax():
    assert lmax(LineHistogram(5, 1, {1: 4, 3: 2})) == 3
    assert lmax(LineHistogram(5, 1, {})) == 0
    x = pd_prefix(10)
    assert lmax(diagonal_histogram(x, 10)) == max(l.length for l in reference_scan(x, 10))


def test_vertical_pd_m1_n64():
    x = pd_prefix(80)
    assert set(vertical_histogram(x, 64, 1, exclude_truncated=True).lengths()) <= {1, 3}
    raw = vertical_histogram(x, 64, 1)
    # x_63 x_64 x_65 = 000: every zero column ends in a run cut to length 2
    assert set(raw.lengths()) == {1, 2, 3}
    assert raw[2] == int((x[:64] == 0).sum())


def test_vertical_pd_m3():
    x = pd_prefix(80)
    assert vertical_histogram(x, 64, 3).counts.keys() == {1}


def test_vertical_constant():
    assert vertical_histogram(constant_word(4), 4).counts == {4: 4}


def vertical_brute(x, n, m):
    R = recurrence_matrix(x, n, m)
    counts = {}
    for j in range(n):
        run = 0
        for i in range(n + 1):
            if i < n and R[i, j]:
                run += 1
            elif run:
                counts[run] = counts.get(run, 0) + 1
                run = 0
    return counts


@pytest.mark.parametrize("m", [1, 2, 3])
def test_vertical_matches_brute(m):
    for x in random_words(5, 30, low=10, high=60):
        n = x.size - m + 1
        assert vertical_histogram(x, n, m).counts == vertical_brute(x, n, m)
    x = pd_prefix(300)
    assert vertical_histogram(x, 290, m).counts == vertical_brute(x, 290, m)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_oracle_equivalence_small_n(m):
    x = pd_prefix(600)
    for n in range(2, 65):
        assert diagonal_histogram(x, n, m) == histogram_of(reference_scan(x, n, m), n, m)


@pytest.mark.parametrize("n", [100, 127, 128, 129, 255, 256, 257, 400, 511, 512])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_oracle_equivalence(n, m):
    x = pd_prefix(600)
    assert diagonal_histogram(x, n, m) == histogram_of(reference_scan(x, n, m), n, m)


@pytest.mark.parametrize("m", [1, 2, 5])
def test_oracle_equivalence_random_words(m):
    for x in random_words(11, 60, low=m + 2):
        n = x.size - m + 1
        if n < 2:
            continue
        assert diagonal_histogram(x, n, m) == histogram_of(reference_scan(x, n, m), n, m)


def test_threads_deterministic(pd_long):
    one = diagonal_histogram(pd_long, 3000, 2)
    assert diagonal_histogram(pd_long, 3000, 2, threads=4) == one
    assert diagonal_histogram(pd_long, 3000, 2, threads=7) == one


def test_exclude_truncated_matches_scan():
    x = pd_prefix(700)
    for n, m in [(100, 1), (333, 1), (257, 3)]:
        kept = [l for l in reference_scan(x, n, m) if not is_truncated(l, n)]
        assert diagonal_histogram(x, n, m, exclude_truncated=True) == histogram_of(kept, n, m)


def test_transpose_symmetry():
    x = pd_prefix(400)
    lines = set(reference_scan(x, 300))
    assert all(StartPoint(l.j, l.i, l.length) in lines for l in lines)
    assert all(c % 2 == 0 for c in diagonal_histogram(x, 300).counts.values())


def test_interior_lengths_allowed():
    x = pd_prefix(1100)
    n = 1000
    lengths = {l.length for l in reference_scan(x, n) if is_interior(l, n)}
    assert all(is_allowed_length(length) for length in lengths)
    assert {1, 2, 3, 5, 7, 11, 15, 23, 31, 47}.issubset(lengths)


def test_truncated_lengths_can_be_anything():
    # the only disallowed keys at finite n come from lines cut by the edge
    x = pd_prefix(600)
    n = 500
    hist = diagonal_histogram(x, n)
    bad = [length for length in hist.lengths() if not is_allowed_length(length)]
    assert bad
    truncated = {l.length for l in reference_scan(x, n) if is_truncated(l, n)}
    assert set(bad) <= truncated


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_recurrence_conservation(m, pd_long):
    for n in (2, 3, 17, 256, 1000):
        hist = diagonal_histogram(pd_long, n, m)
        assert hist.recurrences == offdiagonal_recurrences(pd_long, n, m)
        assert hist.recurrences <= n * n - n
    for x in random_words(3, 20, low=m + 2):
        n = x.size - m + 1
        if n >= 2:
            assert diagonal_histogram(x, n, m).recurrences == offdiagonal_recurrences(x, n, m)


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_embedding_shift_exact_with_enlarged_plot(m, pd_long):
    # lines of RP^m(n) <-> lines of RP^1(n+m-1) of length >= m, shortened by m-1
    for n in (10, 64, 100, 1000, 2048):
        lhs = diagonal_histogram(pd_long, n, m).counts
        full = diagonal_histogram(pd_long, n + m - 1, 1).counts
        rhs = {l - m + 1: c for l, c in full.items() if l >= m}
        assert lhs == rhs


def test_embedding_shift_same_n_differs_only_at_boundary():
    x = pd_prefix(100)
    n, m = 64, 2
    lhs = diagonal_histogram(x, n, m).counts
    rhs = {l - m + 1: c for l, c in diagonal_histogram(x, n, 1).counts.items() if l >= m}
    assert lhs != rhs
    m_lines = {l for l in reference_scan(x, n, m)}
    one_lines = {StartPoint(l.i, l.j, l.length - m + 1)
                 for l in reference_scan(x, n, 1) if l.length >= m}
    for line in m_lines ^ one_lines:
        assert max(line.i, line.j) + line.length + m - 1 > n
