"""
Finite-size recurrence quantifiers computed from a diagonal line histogram.

All normalisations use ``n**2 - n`` (the main diagonal is excluded).  Every
quantifier except the entropy is an exact :class:`~fractions.Fraction`;
undefined values are ``None``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from .rplines import LineHistogram


@dataclass(frozen=True)
class RqaReport:
    n: int
    m: int
    lmin: int
    dens: Dict[int, Fraction] = field(default_factory=dict)
    denss: Fraction = Fraction(0)
    rr: Fraction = Fraction(0)
    det: Optional[Fraction] = None
    lavg: Optional[Fraction] = None
    entr: Optional[float] = None

    @property
    def lmax(self) -> int:
        return max(self.dens, default=0)


def _plogp_inv(p: Fraction) -> float:
    # p * log(1/p) from the exact ratio, no intermediate float division
    return float(p) * (math.log(p.denominator) - math.log(p.numerator))


def quantify(hist: LineHistogram, lmin: int = 2) -> RqaReport:
    """
    Compute DENS, DENSS, RR, DET, LAVG and ENTR from a histogram.

    Parameters
    ----------
    hist : LineHistogram
        Diagonal histogram of ``RP^m(n)``.
    lmin : int
        Smallest line length counted by DENSS/RR/DET/LAVG/ENTR.

    Notes
    -----
    ``dens`` covers every length present.  DET is ``None`` when there is no
    recurrence at all, LAVG and ENTR are ``None`` when no line reaches
    ``lmin``.  ENTR is the Shannon entropy (natural log) of the distribution
    ``NLINES_l / NLINESS_lmin`` over ``l >= lmin``, with ``0 log 0 = 0``.
    """
    if hist.kind != "diagonal":
        raise ValueError("quantifiers are defined on diagonal histograms")
    if hist.n < 2:
        raise ValueError("n must be >= 2")
    if lmin < 1:
        raise ValueError("lmin must be >= 1")
    norm = hist.n * hist.n - hist.n
    dens = {l: Fraction(c, norm) for l, c in hist.counts.items()}
    long_lines = {l: c for l, c in hist.counts.items() if l >= lmin}
    n_long = sum(long_lines.values())
    denss = Fraction(n_long, norm)
    rr_l = Fraction(sum(l * c for l, c in long_lines.items()), norm)
    rr_1 = Fraction(hist.recurrences, norm)
    det = rr_l / rr_1 if rr_1 else None
    lavg = rr_l / denss if n_long else None
    entr = None
    if n_long:
        entr = sum(_plogp_inv(Fraction(c, n_long)) for c in long_lines.values())
    return RqaReport(hist.n, hist.m, lmin, dens, denss, rr_l, det, lavg, entr)


def eps_to_embedding(eps: float, m: int) -> int:
    """
    Embedding dimension reproducing a distance threshold ``eps``.

    Under the metric ``2**-k`` (``k`` the first differing index),
    ``dist <= eps`` with ``2**-h <= eps < 2**(1-h)`` means agreement on the
    first ``max(h, 0)`` symbols, so the plot equals the symbolic one with
    embedding ``m + max(h, 0)``.
    """
    if not (eps > 0 and math.isfinite(eps)):
        raise ValueError(f"eps must be positive and finite, got {eps}")
    if m < 1:
        raise ValueError("m must be >= 1")
    _, e = math.frexp(eps)  # eps in [2**(e-1), 2**e)
    h = 1 - e
    return m + max(h, 0)
