#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Paired two-sided Wilcoxon signed-rank test.

Small samples (``n <= 15`` after dropping zero differences) get the exact
permutation distribution of the signed-rank sum, computed by dynamic programming
over doubled ranks so tied (half-integer) ranks stay exact. Larger samples use the
normal approximation with tie and continuity corrections.
"""
# Import built-in modules
import logging
from typing import NamedTuple

# Import third-party modules
import numpy as np
from scipy.stats import norm
from scipy.stats import rankdata

# Import local modules
from seedopt.constants import EXACT_WILCOXON_LIMIT
from seedopt.constants import MIN_WILCOXON_SAMPLES
from seedopt.exceptions import StatisticsError


logger = logging.getLogger(__name__)

METHOD_AUTO = "auto"
METHOD_EXACT = "exact"
METHOD_NORMAL = "normal"


class WilcoxonResult(NamedTuple):
    statistic: float
    p_value: float


def _signed_ranks(xs, ys):
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise StatisticsError("Paired samples must be 1-D and of equal length, got %s and %s"
                              % (xs.shape, ys.shape))
    differences = xs - ys
    nonzero = differences[differences != 0]
    if len(differences) and not len(nonzero):
        raise StatisticsError("all differences zero")
    if len(nonzero) < MIN_WILCOXON_SAMPLES:
        raise StatisticsError("Wilcoxon test needs at least %d nonzero differences, got %d"
                              % (MIN_WILCOXON_SAMPLES, len(nonzero)))
    ranks = rankdata(np.abs(nonzero))
    return ranks, nonzero > 0


def _exact_p_value(ranks, positive):
    doubled = np.rint(2 * ranks).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:-r]
        counts = counts + shifted
    counts /= counts.sum()
    observed = int(doubled[positive].sum())
    lower = counts[:observed + 1].sum()
    upper = counts[observed:].sum()
    return float(min(1.0, 2.0 * min(lower, upper)))


def _normal_p_value(ranks, positive):
    n = len(ranks)
    _, tie_counts = np.unique(ranks, return_counts=True)
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_counts ** 3 - tie_counts)) / 48.0
    if variance <= 0:
        raise StatisticsError("Wilcoxon variance is zero")
    mean = n * (n + 1) / 4.0
    deviation = max(abs(float(ranks[positive].sum()) - mean) - 0.5, 0.0)
    return min(1.0, 2.0 * float(norm.sf(deviation / np.sqrt(variance))))


def wilcoxon_signed_rank(xs, ys, method=METHOD_AUTO):
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Args:
        xs: First sample
        ys: Second sample, paired with ``xs``
        method: ``auto`` (exact up to 15 pairs), ``exact`` or ``normal``

    Returns:
        WilcoxonResult: ``W = min(W+, W-)`` and the two-sided p-value

    Raises:
        StatisticsError: If every difference is zero or fewer than 5 remain
    """
    ranks, positive = _signed_ranks(xs, ys)
    w_plus = float(ranks[positive].sum())
    w_minus = float(ranks[~positive].sum())
    if method == METHOD_AUTO:
        method = METHOD_EXACT if len(ranks) <= EXACT_WILCOXON_LIMIT else METHOD_NORMAL
    if method == METHOD_EXACT:
        p_value = _exact_p_value(ranks, positive)
    elif method == METHOD_NORMAL:
        p_value = _normal_p_value(ranks, positive)
    else:
        raise ValueError("unknown Wilcoxon method %r" % (method,))
    logger.debug("Wilcoxon n=%d W+=%s W-=%s p=%.6g (%s)", len(ranks), w_plus, w_minus, p_value, method)
    return WilcoxonResult(float(min(w_plus, w_minus)), float(p_value))
