"""Exact recurrence quantification analysis of the period-doubling sequence.

All positions are 1-based, as in ``x_1 x_2 x_3 ... = 0 1 0 0 ...``.
"""

from .pdseq import (as_word, in_m1, in_position_set, is_recognizable, pd_letter,
                    pd_prefix, pd_prefix_substitution, pd_prefix_toeplitz,
                    pd_prefix_valuation, substitution_apply, PositionSetSpec,
                    Recognizability)
from .rplines import (LineHistogram, StartPoint, diagonal_histogram, lmax,
                      reference_scan, vertical_histogram)
from .rqa import RqaReport, eps_to_embedding, quantify

__version__ = "0.1.0"
