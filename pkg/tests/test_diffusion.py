#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Tests for cascade simulation and the spread/time estimators."""
# Import built-in modules
import json
import os

# Import third-party modules
import numpy as np
import pytest

# Import local modules
from seedopt.api.diffusion import DelayDistribution
from seedopt.api.diffusion import RealizationBank
from seedopt.api.diffusion import check_seeds
from seedopt.api.diffusion import dump_trace
from seedopt.api.diffusion import estimate_objectives_mc
from seedopt.api.diffusion import exact_expectation
from seedopt.api.diffusion import simulate_cascade
from seedopt.api.fixtures import toy10_ids
from seedopt.api.graph import CostModel
from seedopt.api.graph import ProbabilityModel
from seedopt.api.graph import build_graph
from seedopt.constants import COST_UNIT
from seedopt.constants import PROB_CONSTANT
from seedopt.exceptions import ConfigError
from seedopt.exceptions import NodeIndexError
from seedopt.exceptions import OracleLimitError
from seedopt.exceptions import SeedSetError
from seedopt.internal.rng import make_rng


def small_wc_graph():
    """Six nodes, fourteen arcs, weighted-cascade probabilities strictly inside (0, 1) for most arcs."""
    sources = [0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 0, 2]
    targets = [1, 2, 2, 3, 3, 4, 4, 5, 5, 0, 0, 1, 3, 5]
    return build_graph(6, sources, targets, directed=True)


def test_path_cascade(path_graph):
    result = simulate_cascade(path_graph(3), [0], rng=make_rng(0))
    assert result.activation_time == {0: 0, 1: 1, 2: 2}
    assert result.activated == frozenset({0, 1, 2})
    assert result.finish_time == 2


def test_all_nodes_seeded(path_graph):
    result = simulate_cascade(path_graph(4), [0, 1, 2, 3], rng=make_rng(0))
    assert result.spread == 4
    assert result.finish_time == 0
    assert set(result.activation_time.values()) == {0}


def test_toy10_cascades(toy10):
    low_cost = simulate_cascade(toy10, toy10_ids("D", "E"), rng=make_rng(1))
    assert low_cost.spread == 8
    assert low_cost.finish_time == 2
    assert toy10_ids("B", "G") == sorted(set(range(10)) - low_cost.activated)

    broad = simulate_cascade(toy10, toy10_ids("B"), rng=make_rng(1))
    assert broad.spread == 10
    assert broad.finish_time == 4


def test_trace_records_activating_arcs(tmpdir, path_graph):
    result = simulate_cascade(path_graph(3), [0], rng=make_rng(0), trace=True)
    assert result.trace == [
        {"node": 0, "time": 0, "edge": None},
        {"node": 1, "time": 1, "edge": [0, 1]},
        {"node": 2, "time": 2, "edge": [1, 2]},
    ]
    path = os.path.join(str(tmpdir), "trace.jsonl")
    dump_trace(result, path)
    with open(path) as f:
        assert [json.loads(line)["node"] for line in f] == [0, 1, 2]


def test_cascade_and_bank_agree_per_realization():
    g = small_wc_graph()
    bank = RealizationBank(g, samples=50, base_seed=11)
    spreads, finish_times = bank.outcomes([0, 3])
    for i in range(50):
        result = simulate_cascade(g, [0, 3], rng=make_rng(11, i))
        assert spreads[i] == result.spread
        assert finish_times[i] == result.finish_time


def test_geometric_delays_agree_per_realization():
    g = small_wc_graph()
    delay = DelayDistribution.parse("geometric:0.4")
    bank = RealizationBank(g, samples=30, delay=delay, base_seed=2)
    _, finish_times = bank.outcomes([1])
    for i in range(30):
        assert finish_times[i] == simulate_cascade(g, [1], delay=delay, rng=make_rng(2, i)).finish_time


def test_exact_path_half():
    g = build_graph(3, [0, 1], [1, 2], prob_model=ProbabilityModel(PROB_CONSTANT, 0.5))
    spread, finish = exact_expectation(g, [0])
    assert spread == pytest.approx(1.75)
    assert finish == pytest.approx(0.75)


def test_exact_all_zero_probabilities():
    g = build_graph(4, [0, 1, 2], [1, 2, 3], prob_model=ProbabilityModel(PROB_CONSTANT, 0.0))
    assert exact_expectation(g, [0, 2]) == (2.0, 0.0)


def test_exact_all_one_probabilities(toy10):
    assert exact_expectation(toy10, toy10_ids("D", "E")) == (8.0, 2.0)


def test_exact_refuses_large_graphs(random_graph):
    with pytest.raises(OracleLimitError):
        exact_expectation(random_graph(30, 10), [0])


def test_exact_refuses_geometric_delay(path_graph):
    with pytest.raises(OracleLimitError):
        exact_expectation(path_graph(3), [0], delay=DelayDistribution("geometric", 0.5))


def test_isolated_seed():
    g = build_graph(2, [0], [1], cost_model=CostModel(COST_UNIT))
    assert estimate_objectives_mc(g, [1], samples=7) == (1.0, 0.0)


def test_estimates_are_deterministic():
    g = small_wc_graph()
    first = estimate_objectives_mc(g, [0], samples=200, base_seed=4)
    second = estimate_objectives_mc(g, [0], samples=200, base_seed=4)
    assert first == second
    assert first != estimate_objectives_mc(g, [0], samples=200, base_seed=5)


@pytest.mark.parametrize("base_seed", [0, 1, 2])
def test_adding_a_seed_never_lowers_coupled_spread(random_graph, base_seed):
    g = random_graph(30, 60, seed=base_seed)
    bank = RealizationBank(g, 40, base_seed=base_seed)
    rng = np.random.default_rng(base_seed)
    for _ in range(20):
        seeds = sorted(rng.choice(30, size=int(rng.integers(1, 6)), replace=False).tolist())
        extra = int(rng.integers(30))
        before, _ = bank.outcomes(seeds)
        after, _ = bank.outcomes(sorted(set(seeds) | {extra}))
        assert np.all(after >= before)


def test_mc_matches_exact_on_path():
    g = build_graph(3, [0, 1], [1, 2], prob_model=ProbabilityModel(PROB_CONSTANT, 0.5))
    spread, finish = estimate_objectives_mc(g, [0], samples=20000, base_seed=0)
    # standard error of either mean is about 0.006
    assert spread == pytest.approx(1.75, abs=0.03)
    assert finish == pytest.approx(0.75, abs=0.03)


@pytest.mark.slow
def test_mc_matches_exact_on_random_graph():
    g = small_wc_graph()
    for seeds in ([0], [1, 4], [2, 3, 5]):
        expected_spread, expected_finish = exact_expectation(g, seeds)
        spread, finish = estimate_objectives_mc(g, seeds, samples=100000, base_seed=9)
        assert spread == pytest.approx(expected_spread, abs=0.02)
        assert finish == pytest.approx(expected_finish, abs=0.02)


def test_geometric_delays_never_shorten_paths():
    g = small_wc_graph()
    unit = RealizationBank(g, samples=40, base_seed=3).outcomes([0])
    slow = RealizationBank(g, samples=40, delay=DelayDistribution("geometric", 0.3), base_seed=3).outcomes([0])
    assert np.all(slow[1] >= unit[1])


def test_check_seeds():
    g = small_wc_graph()
    assert check_seeds(g, [4, 1]).tolist() == [1, 4]
    with pytest.raises(SeedSetError):
        check_seeds(g, [])
    with pytest.raises(SeedSetError):
        check_seeds(g, [1, 1])
    with pytest.raises(NodeIndexError):
        check_seeds(g, [6])


def test_bank_needs_samples():
    with pytest.raises(ConfigError):
        RealizationBank(small_wc_graph(), samples=0)


@pytest.mark.parametrize("text", ["geometric:0", "geometric:1.5", "poisson:1", "geometric"])
def test_delay_parse_rejects(text):
    with pytest.raises(ConfigError):
        DelayDistribution.parse(text)


def test_delay_samples_are_positive():
    delays = DelayDistribution("geometric", 0.2).sample(make_rng(0), 1000)
    assert delays.min() >= 1
    assert DelayDistribution.parse("unit").sample(make_rng(0), 3).tolist() == [1, 1, 1]


@pytest.mark.slow
def test_mc_agrees_with_exact_on_many_small_graphs():
    rng = np.random.default_rng(2024)
    misses = 0
    for trial in range(200):
        n = int(rng.integers(2, 11))
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        m = int(rng.integers(1, min(12, len(pairs)) + 1))
        chosen = rng.choice(len(pairs), size=m, replace=False)
        p = float(rng.choice([0.3, 0.5, 1.0]))
        g = build_graph(n, [pairs[i][0] for i in chosen], [pairs[i][1] for i in chosen], directed=True,
                        prob_model=ProbabilityModel(PROB_CONSTANT, p))
        seeds = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())
        expected = exact_expectation(g, seeds)
        spreads, finish_times = RealizationBank(g, samples=100000, base_seed=trial).outcomes(seeds)
        for values, target in zip((spreads, finish_times), expected):
            error = values.std(ddof=1) / np.sqrt(len(values))
            if abs(values.mean() - target) > 4 * error + 1e-9:
                misses += 1
    assert misses <= 4
