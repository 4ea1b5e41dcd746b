"""
The period-doubling sequence and arithmetic predicates on its positions.

Positions are **1-based** throughout: ``x_1 x_2 x_3 ... = 0 1 0 0 ...``.
A word is held as a read-only ``numpy.uint8`` array of 0/1 symbols; element
``w[0]`` is the letter at position 1.

Three independent generators are provided:

* :func:`pd_letter` / :func:`pd_letters` -- parity of the 2-adic valuation,
* :func:`pd_prefix_substitution` -- iterating ``0 -> 01``, ``1 -> 00``,
* :func:`pd_prefix_toeplitz` -- filling holes with the patterns ``(0*)`` and
  ``(1*)`` alternately.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

WordLike = Union[str, Sequence[int], np.ndarray]

# bits 1, 3, 5, ... of a 64-bit word: a power of two 2**v lands here iff v is odd
_ODD_POWER_MASK = 0x2AAAAAAAAAAAAAAA


def as_word(w: WordLike) -> np.ndarray:
    """Return ``w`` as a read-only uint8 array, checking every symbol is 0/1."""
    if isinstance(w, str):
        if set(w) - {"0", "1"}:
            raise ValueError(f"word must contain only '0' and '1': {w!r}")
        arr = np.frombuffer(w.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(w)
        if arr.ndim != 1:
            raise ValueError("word must be one-dimensional")
        if arr.size and ((arr != 0) & (arr != 1)).any():
            raise ValueError("word symbols must be 0 or 1")
        arr = arr.astype(np.uint8)
    arr = np.array(arr, dtype=np.uint8)
    arr.flags.writeable = False
    return arr


def word_str(w: WordLike) -> str:
    """Render a word as a string of ASCII ``0``/``1`` characters."""
    arr = np.asarray(w, dtype=np.uint8)
    return (arr + ord("0")).tobytes().decode("ascii")


def valuation2(i: int) -> int:
    """2-adic valuation of a positive integer."""
    if i < 1:
        raise ValueError(f"valuation undefined for i={i}; positions start at 1")
    return (i & -i).bit_length() - 1


def pd_letter(i: int) -> int:
    """Letter ``x_i`` of the period-doubling sequence (``i >= 1``).

    >>> [pd_letter(i) for i in range(1, 9)]
    [0, 1, 0, 0, 0, 1, 0, 1]
    """
    return valuation2(i) & 1


def pd_letters(i) -> np.ndarray:
    """Vectorised :func:`pd_letter` for an integer array of positions."""
    i = np.asarray(i, dtype=np.int64)
    if i.size and i.min() < 1:
        raise ValueError("positions start at 1")
    low = i & -i
    return ((low & _ODD_POWER_MASK) != 0).astype(np.uint8)


def substitution_apply(w: WordLike, iterations: int = 1) -> np.ndarray:
    """Apply the period-doubling substitution ``xi(a) = 0 (1-a)`` repeatedly."""
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    w = np.asarray(as_word(w))
    for _ in range(iterations):
        out = np.zeros(2 * w.size, dtype=np.uint8)
        out[1::2] = 1 - w
        w = out
    return as_word(w)


def pd_prefix_substitution(n: int) -> np.ndarray:
    """First ``n`` letters, by iterating the substitution on ``0``.

    Since ``xi(x_i) = x_{2i-1} x_{2i}``, each step doubles the known prefix.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    w = np.zeros(1, dtype=np.uint8)
    while w.size < n:
        out = np.zeros(2 * w.size, dtype=np.uint8)
        out[1::2] = 1 - w
        w = out
    return as_word(w[:n])


def pd_prefix_toeplitz(n: int) -> np.ndarray:
    """First ``n`` letters, by the Toeplitz hole-filling construction.

    Round ``r`` writes the symbol ``r mod 2`` into every other remaining hole,
    starting with the first hole; the unfilled half carries on to round
    ``r + 1``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x = np.empty(n, dtype=np.uint8)
    holes = np.arange(n)
    symbol = 0
    while holes.size:
        x[holes[0::2]] = symbol
        holes = holes[1::2]
        symbol ^= 1
    return as_word(x)


def pd_prefix_valuation(n: int) -> np.ndarray:
    """First ``n`` letters, computed position by position from the valuation."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return as_word(pd_letters(np.arange(1, n + 1)))


def pd_prefix(n: int) -> np.ndarray:
    """Default generator used by the rest of the package."""
    return pd_prefix_substitution(n)


def in_m1(i):
    """Whether position ``i`` holds the letter 1 (valuation of ``i`` is odd).

    Accepts a Python int or an integer array; non-positive entries are
    reported as non-members.
    """
    if isinstance(i, (int, np.integer)):
        i = int(i)
        return i >= 1 and bool(valuation2(i) & 1)
    i = np.asarray(i, dtype=np.int64)
    return (i >= 1) & (((i & -i) & _ODD_POWER_MASK) != 0)


def in_n_k(i, k: int):
    """Whether ``i`` lies in ``N_k = {i : i = 2**k (mod 2**(k+1))}``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(i, (int, np.integer)):
        i = int(i)
        return i >= 1 and i % (1 << (k + 1)) == (1 << k)
    i = np.asarray(i, dtype=np.int64)
    return (i >= 1) & (i % (1 << (k + 1)) == (1 << k))


@dataclass(frozen=True)
class PositionSetSpec:
    """The affine image ``scale * S + offset`` of a base set of positions.

    ``base`` is ``"M1"`` or ``"N"``; ``k`` parametrises ``N_k``.
    """

    base: str = "M1"
    scale: int = 1
    offset: int = 0
    k: int = 0

    def __post_init__(self):
        if self.base not in ("M1", "N"):
            raise ValueError(f"unknown base set {self.base!r}")
        if self.scale < 1:
            raise ValueError("scale must be positive")
        if self.offset <= -self.scale:
            raise ValueError("offset must exceed -scale")
        if self.k < 0:
            raise ValueError("k must be non-negative")

    def _base_member(self, q):
        if self.base == "M1":
            return in_m1(q)
        return in_n_k(q, self.k)

    def contains(self, i):
        return in_position_set(self, i)


def in_position_set(spec: PositionSetSpec, i):
    """Membership of ``i`` (int or integer array) in ``spec``."""
    c, d = spec.scale, spec.offset
    if isinstance(i, (int, np.integer)):
        i = int(i)
        if (i - d) % c:
            return False
        q = (i - d) // c
        return q >= 1 and bool(spec._base_member(q))
    i = np.asarray(i, dtype=np.int64)
    q, r = np.divmod(i - d, c)
    return (r == 0) & (q >= 1) & spec._base_member(np.where(q >= 1, q, 1))


class Recognizability(Enum):
    RECOGNIZABLE_ODD = "recognizable_odd"
    RECOGNIZABLE_EVEN = "recognizable_even"
    NOT_RECOGNIZABLE = "not_recognizable"
    NOT_IN_LANGUAGE = "not_in_language"


def default_horizon(length: int) -> int:
    # validated empirically by exhaustive scans in the test suite
    return 4 * length + 16


def occurrences(w: WordLike, prefix: np.ndarray) -> np.ndarray:
    """1-based start positions ``i`` with ``prefix[i : i+|w|] == w``."""
    w = np.asarray(as_word(w))
    prefix = np.asarray(prefix)
    if w.size == 0:
        return np.arange(1, prefix.size + 2)
    if w.size > prefix.size:
        return np.zeros(0, dtype=np.int64)
    windows = np.lib.stride_tricks.sliding_window_view(prefix, w.size)
    return np.flatnonzero((windows == w).all(axis=1)) + 1


def is_recognizable(w: WordLike, search_horizon: int | None = None) -> Recognizability:
    """Classify a word by the parity of its occurrence positions.

    Only ``∅``, ``0`` and ``00`` occur at positions of both parities.  The word
    is looked up in ``x_1 ... x_horizon``; if it does not occur there it is
    reported as not in the language.
    """
    w = as_word(w)
    horizon = default_horizon(w.size) if search_horizon is None else search_horizon
    if horizon < 1:
        raise ValueError("search_horizon must be positive")
    prefix = pd_prefix(max(horizon, w.size))
    occ = occurrences(w, prefix)
    if occ.size == 0:
        return Recognizability.NOT_IN_LANGUAGE
    parities = set((occ % 2).tolist())
    if len(parities) == 2:
        return Recognizability.NOT_RECOGNIZABLE
    if parities == {1}:
        return Recognizability.RECOGNIZABLE_ODD
    return Recognizability.RECOGNIZABLE_EVEN
