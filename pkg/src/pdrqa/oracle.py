"""
Closed forms for the recurrence plot of the period-doubling sequence.

Everything here is exact: rationals are :class:`fractions.Fraction`, powers of
two are Python integers.  Only the entropy values are floats.

Allowed diagonal-line lengths are ``2**(k+1) - 1`` ("pow2" lengths) and
``3 * 2**k - 1`` ("three_pow2" lengths).  Start points of lines of a given
length are affine images of three sets built from ``M1`` (positions holding
a 1)::

    A = (2 M1 - 1) x (2 M1 + 1)  u  (2 M1) x ((4 M1 - 1) u (4 M1 + 1))
    B = (2 M1 - 1) u (2 M1)
    C = (2 M1 - 1) x (2 M1)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .pdseq import (PositionSetSpec, WordLike, as_word, in_m1, in_position_set,
                    pd_letter, pd_prefix, substitution_apply, word_str)

LOG2 = math.log(2.0)
LOG3 = math.log(3.0)
TWO_LOG2 = 2.0 * LOG2


class OracleParams(NamedTuple):
    """Dyadic scale ``k`` and case constant ``a`` of a length.

    ``k`` is the smallest integer ``>= 0`` with
    ``3 * 2**(k-1) - 1 < length <= 3 * 2**k - 1``; ``a = 2`` in case I
    (``length <= 2**(k+1) - 1``) and ``a = 1`` in case II.
    """

    length: int
    k: int
    a: int
    case: str


def params(length: int) -> OracleParams:
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    k = 0
    while 3 * (1 << k) - 1 < length:
        k += 1
    if length <= (1 << (k + 1)) - 1:
        return OracleParams(length, k, 2, "I")
    return OracleParams(length, k, 1, "II")


def k_floor_formula(length: int) -> int:
    """``floor(log2((length + 1) / 3))`` in exact integer arithmetic.

    Kept only to document that this shortcut is *not* ``params(length).k``
    (it differs at e.g. lengths 1 and 3).
    """
    k = -1
    while 3 * (1 << (k + 1)) <= length + 1:
        k += 1
    return k


class LengthKind(Enum):
    POW2 = "pow2"
    THREE_POW2 = "three_pow2"
    NONE = "none"


class LengthClass(NamedTuple):
    length: int
    kind: LengthKind
    k: int | None


def classify_length(length: int) -> LengthClass:
    """Is ``length`` of the form ``2**(k+1) - 1``, ``3 * 2**k - 1``, or neither?"""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    p = length + 1
    if p & (p - 1) == 0:
        return LengthClass(length, LengthKind.POW2, p.bit_length() - 2)
    if p % 3 == 0:
        q = p // 3
        if q & (q - 1) == 0:
            return LengthClass(length, LengthKind.THREE_POW2, q.bit_length() - 1)
    return LengthClass(length, LengthKind.NONE, None)


def is_allowed_length(length: int) -> bool:
    return classify_length(length).kind is not LengthKind.NONE


def allowed_lengths(upto: int) -> list[int]:
    """All allowed lengths ``<= upto`` in increasing order."""
    out = []
    k = 0
    while 3 * (1 << k) - 1 <= upto or (1 << (k + 1)) - 1 <= upto:
        for length in ((1 << (k + 1)) - 1, 3 * (1 << k) - 1):
            if length <= upto:
                out.append(length)
        k += 1
    return sorted(out)


def determining_word(length: int) -> np.ndarray:
    """The unique word repeated by every line of an allowed length.

    This is ``x_1 ... x_length`` for pow2 lengths, but for three_pow2 lengths
    it is ``xi^k(000)`` without its last letter, which is not a prefix of the
    sequence (``00`` for length 2, ``01010`` for length 5).
    """
    cls = classify_length(length)
    if cls.kind is LengthKind.POW2:
        seed = [0, 0]
    elif cls.kind is LengthKind.THREE_POW2:
        seed = [0, 0, 0]
    else:
        raise ValueError(f"{length} is not a diagonal-line length")
    return as_word(substitution_apply(seed, cls.k)[:-1])


# ---------------------------------------------------------------------------
# asymptotic densities and quantifiers

def dens_asymptotic(length: int) -> Fraction:
    """Density of start points of lines of exactly this length."""
    cls = classify_length(length)
    if cls.kind is LengthKind.NONE:
        return Fraction(0)
    if cls.kind is LengthKind.POW2:
        value, c = Fraction(1, 9 * 4 ** cls.k), Fraction(4, 9)
    else:
        value, c = Fraction(1, 18 * 4 ** cls.k), Fraction(1, 2)
    if value != c / (length + 1) ** 2:
        raise AssertionError(f"density forms disagree at length {length}")
    return value


def denss_asymptotic(length: int) -> Fraction:
    """Density of start points of lines of length at least ``length``."""
    p = params(length)
    return Fraction(p.a, 9 * 4 ** p.k)


def rr(m: int, length: int) -> Fraction:
    """Asymptotic recurrence rate counted over lines of length ``>= length``."""
    p = params(length + m - 1)
    return Fraction(2 * p.a + 3, 9 * 2 ** p.k) - Fraction(p.a, 9 * 4 ** p.k)


def det(m: int, length: int) -> Fraction:
    return rr(m, length) / rr(m, 1)


def lavg(m: int, length: int) -> Fraction:
    p = params(length + m - 1)
    value = (2 + Fraction(3, p.a)) * 2 ** p.k - 1
    if value != rr(m, length) / denss_asymptotic(length + m - 1):
        raise AssertionError("average line length forms disagree")
    return value


def rr_embedded(m: int, length: int) -> Fraction:
    """Limit of the finite-plot ``RR^m_length(n)`` for any ``m``.

    A line of length ``L`` in ``RP^m`` is a line of length ``L + m - 1`` in
    ``RP^1``, so every line loses ``m - 1`` cells relative to :func:`rr`.
    The two agree for ``m = 1``.
    """
    shifted = length + m - 1
    return rr(1, shifted) - (m - 1) * denss_asymptotic(shifted)


def det_embedded(m: int, length: int) -> Fraction:
    return rr_embedded(m, length) / rr_embedded(m, 1)


def lavg_embedded(m: int, length: int) -> Fraction:
    """Limit of ``LAVG^m_length(n)``: :func:`lavg` shortened by ``m - 1``."""
    value = lavg(m, length) - (m - 1)
    if value != rr_embedded(m, length) / denss_asymptotic(length + m - 1):
        raise AssertionError("average line length forms disagree")
    return value


def lavg_bounds(shifted_length: int) -> tuple[Fraction, Fraction]:
    """Linear sandwich for the average line length, ``shifted_length >= 2``."""
    if shifted_length < 2:
        raise ValueError("bounds hold for length + m - 1 >= 2")
    return (Fraction(5, 3) * shifted_length + Fraction(2, 3),
            Fraction(5, 2) * shifted_length - 1)


def entropy_sum(length: int) -> float:
    """``-sum_{l >= length} DENS_l log DENS_l`` in closed form."""
    p = params(length)
    numerator = (p.a * p.k + 1) * LOG2 + p.a * LOG3
    # 18 * 4**(k-1), with k = 0 giving 18/4
    return numerator * 4 / (18 * 4 ** p.k)


def entr_from_sums(length: int) -> float:
    """Entropy of line lengths rebuilt from the tail sums.

    ``log(DENSS) + entropy_sum / DENSS``; should always come out as
    ``2 log 2``.
    """
    s = denss_asymptotic(length)
    return math.log(s.numerator) - math.log(s.denominator) + entropy_sum(length) / float(s)


def entr(m: int, length: int) -> float:
    if m < 1 or length < 1:
        raise ValueError("m and length must be >= 1")
    return TWO_LOG2


class DetClass(Enum):
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"


def det_class(m: int, length: int) -> DetClass:
    """Which part of the ``A1 | A2 | A3`` partition of embedding dimensions ``m`` is in.

    ``A1`` (determinism exactly 1) when ``m`` and ``length + m - 1`` share
    ``(k, a)``; ``A2`` when ``m`` sits at the top of a case-I block and
    ``length + m - 1`` falls in the case-II block of the same ``k``; anything
    else is ``A3``.
    """
    if length < 2:
        raise ValueError("the partition is defined for length >= 2")
    pm = params(m)
    pl = params(length + m - 1)
    if (pm.k, pm.a) == (pl.k, pl.a):
        return DetClass.A1
    k = pm.k
    if pm.a == 2 and (1 << (k + 1)) - 1 < length + m - 1 <= 3 * (1 << k) - 1:
        return DetClass.A2
    return DetClass.A3


def in_a3_tilde(m: int, length: int) -> bool:
    """The infinite part of ``A3``: ``2**(k+1)-1 < m <= 3*2**k-1 < length+m-1 <= 2**(k+2)-1``."""
    pm = params(m)
    k = pm.k
    return pm.a == 1 and 3 * (1 << k) - 1 < length + m - 1 <= (1 << (k + 2)) - 1


# ---------------------------------------------------------------------------
# start points

def _image(c: int, d: int, k: int) -> PositionSetSpec:
    """``2**k (c M1 + d) - (2**k - 1)`` as a single affine image of ``M1``."""
    s = 1 << k
    return PositionSetSpec("M1", scale=s * c, offset=s * d - s + 1)


def _in_a(i, j, k: int):
    return ((in_position_set(_image(2, -1, k), i) & in_position_set(_image(2, 1, k), j))
            | (in_position_set(_image(2, 0, k), i)
               & (in_position_set(_image(4, -1, k), j)
                  | in_position_set(_image(4, 1, k), j))))


def _in_b(i, k: int):
    return in_position_set(_image(2, -1, k), i) | in_position_set(_image(2, 0, k), i)


def _in_c(i, j, k: int):
    return in_position_set(_image(2, -1, k), i) & in_position_set(_image(2, 0, k), j)


def _line_start(i, j, cls: LengthClass):
    k = cls.k
    if cls.kind is LengthKind.POW2:
        return (_in_a(i, j, k) | _in_a(j, i, k)
                | ((j == 1) & _in_b(i, k)) | ((i == 1) & _in_b(j, k)))
    return _in_c(i, j, k) | _in_c(j, i, k)


def is_line_start(i: int, j: int, length: int) -> bool:
    """Does a diagonal line of exactly ``length`` start at ``(i, j)`` in the infinite plot?"""
    if i < 1 or j < 1 or length < 1:
        raise ValueError("i, j and length must be positive")
    if i == j:
        raise ValueError("the main diagonal carries no lines")
    cls = classify_length(length)
    if cls.kind is LengthKind.NONE:
        return False
    return bool(_line_start(int(i), int(j), cls))


def line_start_mask(length: int, n: int) -> np.ndarray:
    """Boolean ``n x n`` matrix of start points ``(i, j)`` (0-based storage)."""
    cls = classify_length(length)
    if cls.kind is LengthKind.NONE:
        return np.zeros((n, n), dtype=bool)
    idx = np.arange(1, n + 1, dtype=np.int64)
    mask = _line_start(idx[:, None], idx[None, :], cls)
    mask = np.broadcast_to(mask, (n, n)).copy()
    np.fill_diagonal(mask, False)
    return mask


def count_line_starts(length: int, n: int) -> int:
    """``|K_length  ∩  [1, n]^2|``."""
    return int(line_start_mask(length, n).sum())


def nonempty_threshold(length: int, n: int) -> bool:
    """Whether some line of this length starts inside ``[1, n]^2``."""
    return is_allowed_length(length) and n >= length + 2


@dataclass(frozen=True)
class DensityBounds:
    """Constants bounding ``D = |K_length ∩ [1,n]^2|`` when it is nonzero.

    ``lower / (l+1)**2 * n**2 < D <= upper / (l+1)**2 * n**2``; ``alpha`` and
    ``beta`` restate this as ``alpha / l**2 <= D / (n**2 - n) <= beta / l**2``
    for ``n >= 2``.
    """

    lower: Fraction
    upper: Fraction
    alpha: Fraction
    beta: Fraction


def density_bounds(length: int) -> DensityBounds:
    cls = classify_length(length)
    if cls.kind is LengthKind.NONE:
        raise ValueError(f"{length} is not a diagonal-line length")
    upper = Fraction(32) if cls.kind is LengthKind.POW2 else Fraction(81, 2)
    lower = Fraction(1, 32)
    # (l+1)**2 <= 4 l**2 and n**2 <= 2 (n**2 - n)
    return DensityBounds(lower, upper, lower / 4, 2 * upper)


# ---------------------------------------------------------------------------
# J and H sets (verification API)

def _flip(a: int) -> int:
    return 1 - a


def _letters(start: int, count: int) -> np.ndarray:
    return np.fromiter((pd_letter(t) for t in range(start, start + count)),
                       dtype=np.uint8, count=count)


_J_SHORT = {
    # word -> {(a, b): list of (c, d) meaning the union of c M1 + d}
    "": {(0, 0): [(2, 0), (2, 1)], (1, 1): [], (0, 1): [(1, 0)], (1, 0): [(1, 1)]},
    "0": {(0, 0): [(2, 0)], (1, 1): [(4, -1), (4, 1)], (0, 1): [(2, 1)],
          (1, 0): [(2, -1)]},
    "00": {(0, 0): [], (1, 1): [], (0, 1): [(2, 0)], (1, 0): [(2, -1)]},
}


def _jset_closed_form(a: int, b: int, w: np.ndarray, i: int) -> bool | None:
    key = word_str(w)
    if key in _J_SHORT:
        return any(in_position_set(PositionSetSpec("M1", c, d), i)
                   for c, d in _J_SHORT[key][(a, b)])
    length = w.size
    if not is_allowed_length(length) or not np.array_equal(w, determining_word(length)):
        return None
    cls = classify_length(length)
    base = "0" if cls.kind is LengthKind.POW2 else "00"
    k = cls.k
    if k & 1:
        a, b = _flip(a), _flip(b)
    return any(in_position_set(_image(c, d, k), i) for c, d in _J_SHORT[base][(a, b)])


def jset_member(a: int, b: int, w: WordLike, i: int) -> bool:
    """Is ``x_{i-1} ... x_{i+|w|}`` equal to ``a w b``?  (``i >= 2``)

    Decided by direct comparison and, when ``w`` is ``∅``, ``0``, ``00`` or
    the determining word of an allowed length, also by the closed-form
    affine images of ``M1``; the two must agree.
    """
    if i < 2:
        raise ValueError("J sets live in i >= 2")
    w = as_word(w)
    direct = (pd_letter(i - 1) == a and pd_letter(i + w.size) == b
              and np.array_equal(_letters(i, w.size), w))
    closed = _jset_closed_form(a, b, w, i)
    if closed is not None and closed != direct:
        raise AssertionError(f"J-set forms disagree: a={a} b={b} w={word_str(w)} i={i}")
    return bool(direct)


def hset_member(b: int, w: WordLike, i: int) -> bool:
    """Is ``x_i ... x_{i+|w|} = w b`` while ``x_1 ... x_{|w|+1} = w (1-b)``?  (``i >= 2``)

    For nonempty ``w`` this is cross-checked against the closed form: the set
    is ``2**k (2 M1 - 1 u 2 M1) - (2**k - 1)`` when ``w = x_1 ... x_l`` with
    ``l = 2**(k+1) - 1`` and ``b = k mod 2``, and empty otherwise.
    """
    if i < 2:
        raise ValueError("H sets live in i >= 2")
    w = as_word(w)
    L = w.size
    head = _letters(1, L + 1)
    direct = (np.array_equal(head[:L], w) and head[L] == _flip(b)
              and np.array_equal(_letters(i, L + 1), np.append(w, b)))
    if L:
        cls = classify_length(L)
        if (cls.kind is LengthKind.POW2 and b == (cls.k & 1)
                and np.array_equal(w, pd_prefix(L))):
            closed = bool(_in_b(i, cls.k))
        else:
            closed = False
        if closed != direct:
            raise AssertionError(f"H-set forms disagree: b={b} w={word_str(w)} i={i}")
    return bool(direct)
