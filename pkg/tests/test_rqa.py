import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdrqa import oracle
from pdrqa.rplines import LineHistogram, diagonal_histogram
from pdrqa.rqa import eps_to_embedding, quantify


def test_constant_word_n4():
    hist = diagonal_histogram(np.zeros(4, dtype=np.uint8), 4)
    rep = quantify(hist, lmin=1)
    assert rep.rr == 1
    assert rep.det == 1
    assert rep.dens == {1: Fraction(2, 12), 2: Fraction(2, 12), 3: Fraction(2, 12)}
    assert rep.lmax == 3
    two = quantify(hist, lmin=2)
    assert two.rr == two.det == Fraction(5, 6)
    assert two.denss == Fraction(4, 12)
    assert two.lavg == Fraction(5, 2)


def test_rr_at_8192(pd_long):
    rep = quantify(diagonal_histogram(pd_long, 2 ** 13), lmin=1)
    assert abs(float(rep.rr) - 5 / 9) / (5 / 9) < 1e-3
    assert rep.det == 1


def test_empty_histogram():
    rep = quantify(LineHistogram(5, 1, {}), lmin=2)
    assert rep.rr == 0 and rep.denss == 0
    assert rep.det is None and rep.lavg is None and rep.entr is None
    assert rep.lmax == 0


def test_only_short_lines():
    rep = quantify(LineHistogram(5, 1, {1: 6}), lmin=2)
    assert rep.det == 0
    assert rep.lavg is None and rep.entr is None


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        quantify(LineHistogram(5, 1, {1: 2}, kind="vertical"))
    with pytest.raises(ValueError):
        quantify(LineHistogram(5, 1, {1: 2}), lmin=0)


@pytest.mark.parametrize("eps, m, expected", [
    (0.3, 1, 3), (1.0, 1, 1), (1.0, 4, 4), (0.5, 1, 2), (0.49, 1, 3),
    (4.0, 2, 2), (2 ** -10, 1, 11), (0.75, 2, 3),
])
def test_eps_to_embedding(eps, m, expected):
    assert eps_to_embedding(eps, m) == expected


@pytest.mark.parametrize("eps", [0.0, -1.0, math.inf, math.nan])
def test_eps_rejects(eps):
    with pytest.raises(ValueError):
        eps_to_embedding(eps, 1)


@given(st.floats(min_value=1e-12, max_value=1e6))
def test_eps_threshold_semantics(eps):
    # dist = 2**-t <= eps exactly for t >= h, where h = m' - m
    h = eps_to_embedding(eps, 1) - 1
    assert 2.0 ** -h <= eps or h == 0
    assert 2.0 ** -(h - 1) > eps or h == 0


histograms = st.dictionaries(st.integers(1, 40), st.integers(1, 50), max_size=12).map(
    lambda d: LineHistogram(200, 1, d))


@settings(max_examples=200)
@given(histograms, st.integers(1, 12))
def test_invariants(hist, lmin):
    rep = quantify(hist, lmin)
    one = quantify(hist, 1)
    assert sum(rep.dens.values()) == one.denss
    assert sum(l * d for l, d in rep.dens.items()) == one.rr
    assert rep.rr <= one.rr
    if rep.det is not None:
        assert 0 <= rep.det <= 1
        assert rep.det * one.rr == rep.rr
    if rep.lavg is not None:
        assert rep.lavg * rep.denss == rep.rr
        assert lmin <= rep.lavg <= rep.lmax
        distinct = sum(1 for l in hist.counts if l >= lmin)
        assert -1e-12 <= rep.entr <= math.log(distinct) + 1e-12
    for a, b in zip(range(1, 13), range(2, 14)):
        assert quantify(hist, b).rr <= quantify(hist, a).rr


def test_entropy_uniform():
    rep = quantify(LineHistogram(50, 1, {2: 4, 3: 4, 5: 4, 7: 4}), lmin=2)
    assert rep.entr == pytest.approx(math.log(4), abs=1e-15)


def test_report_against_oracle_at_8192(pd_long):
    n = 2 ** 13
    for lmin in (1, 2, 3):
        rep = quantify(diagonal_histogram(pd_long, n), lmin)
        assert float(rep.rr) == pytest.approx(float(oracle.rr(1, lmin)), rel=0.01)
        assert float(rep.lavg) == pytest.approx(float(oracle.lavg(1, lmin)), rel=0.02)
        assert rep.entr == pytest.approx(oracle.TWO_LOG2, abs=0.03)
