#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Tests for the paired Wilcoxon signed-rank test."""
# Import third-party modules
import numpy as np
import pytest
from scipy import stats

# Import local modules
from seedopt.api.stats import wilcoxon_signed_rank
from seedopt.exceptions import StatisticsError


def test_identical_samples():
    with pytest.raises(StatisticsError) as excinfo:
        wilcoxon_signed_rank([0.5] * 10, [0.5] * 10)
    assert "all differences zero" in str(excinfo.value)


def test_constant_shift_is_exact():
    xs = np.linspace(0.1, 0.9, 10)
    result = wilcoxon_signed_rank(xs + 0.05, xs)
    assert result.statistic == 0.0
    assert result.p_value == pytest.approx(2.0 / 1024)


def test_too_few_differences():
    with pytest.raises(StatisticsError):
        wilcoxon_signed_rank([1, 2, 3, 4, 5], [1, 2, 3, 4, 6])


def test_unpaired_lengths():
    with pytest.raises(StatisticsError):
        wilcoxon_signed_rank([1, 2, 3, 4, 5, 6], [1, 2, 3])


@pytest.mark.parametrize("seed, n", [(0, 6), (1, 9), (2, 12), (3, 15)])
def test_exact_matches_scipy(seed, n):
    rng = np.random.default_rng(seed)
    xs = rng.normal(size=n)
    ys = rng.normal(loc=0.3, size=n)
    expected = stats.wilcoxon(xs, ys)
    result = wilcoxon_signed_rank(xs, ys)
    assert result.statistic == pytest.approx(expected.statistic)
    assert result.p_value == pytest.approx(expected.pvalue)


def test_symmetric_in_argument_order():
    rng = np.random.default_rng(7)
    xs, ys = rng.random(12), rng.random(12)
    forward, backward = wilcoxon_signed_rank(xs, ys), wilcoxon_signed_rank(ys, xs)
    assert forward.statistic == backward.statistic
    assert forward.p_value == pytest.approx(backward.p_value)


def test_normal_approximation_for_large_samples():
    differences = np.arange(1.0, 21.0)
    result = wilcoxon_signed_rank(differences, np.zeros(20))
    variance = 20 * 21 * 41 / 24.0
    expected = 2 * stats.norm.sf((210 - 105 - 0.5) / np.sqrt(variance))
    assert result.statistic == 0.0
    assert result.p_value == pytest.approx(expected)


def test_forced_methods_agree_roughly():
    rng = np.random.default_rng(11)
    xs, ys = rng.random(14), rng.random(14) + 0.2
    exact = wilcoxon_signed_rank(xs, ys, method="exact")
    normal = wilcoxon_signed_rank(xs, ys, method="normal")
    assert exact.statistic == normal.statistic
    assert normal.p_value == pytest.approx(exact.p_value, abs=0.03)
    with pytest.raises(ValueError):
        wilcoxon_signed_rank(xs, ys, method="bootstrap")


def test_p_value_is_bounded():
    xs = [1.0, -1.0, 2.0, -2.0, 3.0, -3.0]
    assert wilcoxon_signed_rank(xs, [0.0] * 6).p_value == 1.0


@pytest.mark.parametrize("method", ["exact", "normal"])
def test_results_are_plain_floats(method):
    result = wilcoxon_signed_rank(np.arange(1.0, 9.0), np.zeros(8), method=method)
    assert type(result.statistic) is float
    assert type(result.p_value) is float
