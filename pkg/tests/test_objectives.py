#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Tests for objective vectors, dominance and the evaluator."""
# Import third-party modules
import numpy as np
import pytest

# Import local modules
from seedopt.api.diffusion import DelayDistribution
from seedopt.api.fixtures import toy10_ids
from seedopt.api.graph import CostModel
from seedopt.api.graph import Graph
from seedopt.api.graph import build_graph
from seedopt.api.objectives import EvalConfig
from seedopt.api.objectives import Evaluator
from seedopt.api.objectives import ObjectiveVector
from seedopt.api.objectives import cost
from seedopt.api.objectives import dominates
from seedopt.api.objectives import evaluate
from seedopt.constants import COST_UNIT
from seedopt.exceptions import ConfigError


def test_toy10_objectives(toy10):
    cfg = EvalConfig(mc_samples=3)
    assert evaluate(toy10, toy10_ids("A", "B"), cfg) == ObjectiveVector(10.0, 5.0, 4.0)
    assert evaluate(toy10, toy10_ids("D", "E"), cfg) == ObjectiveVector(8.0, 4.0, 2.0)
    assert evaluate(toy10, toy10_ids("B"), cfg) == ObjectiveVector(10.0, 3.0, 4.0)


def test_isolated_zero_cost_node():
    g = Graph(2, [0], [1], [1.0], [0.0, 0.0])
    assert evaluate(g, [1], EvalConfig(mc_samples=5)) == ObjectiveVector(1.0, 0.0, 0.0)


def test_cost_models(toy10):
    unit = build_graph(4, [0, 1], [1, 2], cost_model=CostModel(COST_UNIT))
    assert cost(unit, [0, 2, 3]) == 3.0
    assert cost(toy10, toy10_ids("B")) == 3.0


def test_zero_costs():
    g = Graph(3, [0, 1], [1, 2], [0.5, 0.5], [0.0, 0.0, 0.0])
    assert cost(g, [0, 1, 2]) == 0.0


@pytest.mark.parametrize("a, b, expected", [
    ((-5, 2, 1), (-3, 4, 2), True),
    ((-5, 2, 1), (-5, 2, 1), False),
    ((-5, 2, 3), (-3, 4, 2), False),
    ((-3, 4, 2), (-5, 2, 3), False),
    ((-5, 2, 2), (-5, 2, 3), True),
])
def test_dominates(a, b, expected):
    assert dominates(a, b) is expected


def test_dominates_objective_vectors():
    assert dominates(ObjectiveVector(10, 3, 4), ObjectiveVector(10, 5, 4))
    assert not dominates(ObjectiveVector(10, 3, 4), ObjectiveVector(8, 4, 2))
    assert not dominates(ObjectiveVector(8, 4, 2), ObjectiveVector(10, 3, 4))


@pytest.mark.parametrize("seed", range(5))
def test_dominance_is_a_strict_partial_order(seed):
    rng = np.random.default_rng(seed)
    for a, b, c in rng.integers(0, 3, size=(300, 3, 3)).tolist():
        assert not dominates(a, a)
        assert not (dominates(a, b) and dominates(b, a))
        if dominates(a, b) and dominates(b, c):
            assert dominates(a, c)


def test_cost_is_additive_over_disjoint_sets(random_graph):
    g = random_graph(40, 80, seed=2)
    rng = np.random.default_rng(8)
    for _ in range(50):
        nodes = rng.permutation(40)[:int(rng.integers(2, 20))].tolist()
        cut = int(rng.integers(1, len(nodes)))
        left, right = nodes[:cut], nodes[cut:]
        assert cost(g, left + right) == pytest.approx(cost(g, left) + cost(g, right))


def test_objective_vector_orientation():
    vector = ObjectiveVector(7.5, 2.0, 1.0)
    assert vector.minimization == (-7.5, 2.0, 1.0)
    assert vector.as_row() == (7.5, 2.0, 1.0)
    assert ObjectiveVector.from_minimization(vector.minimization) == vector


def test_objective_vector_rejects_negative():
    with pytest.raises(ValueError):
        ObjectiveVector(-1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        ObjectiveVector(1.0, float("nan"), 0.0)


def test_evaluator_cache(random_graph):
    evaluator = Evaluator(random_graph(20, 20), EvalConfig(mc_samples=20))
    first = evaluator.evaluate([3, 1])
    second = evaluator.evaluate((1, 3))
    assert first is second
    assert (evaluator.hits, evaluator.misses) == (1, 1)


def test_evaluator_without_cache(random_graph):
    evaluator = Evaluator(random_graph(20, 20), EvalConfig(mc_samples=20, cache_enabled=False))
    assert evaluator.evaluate([2]) == evaluator.evaluate([2])
    assert evaluator.misses == 2


def test_reseed_changes_common_random_numbers(random_graph):
    g = random_graph(40, 40, seed=3)
    evaluator = Evaluator(g, EvalConfig(mc_samples=30))
    before = [evaluator.evaluate([v]) for v in range(10)]
    evaluator.reseed(99)
    after = [evaluator.evaluate([v]) for v in range(10)]
    assert evaluator.base_seed == 99
    assert before != after
    assert [v.cost for v in before] == [v.cost for v in after]


def test_evaluate_many_order_independent_of_threads(random_graph):
    g = random_graph(40, 60, seed=1)
    seed_sets = [[v, (v + 7) % 40] for v in range(20)]
    serial = Evaluator(g, EvalConfig(mc_samples=25)).evaluate_many(seed_sets)
    threaded = Evaluator(g, EvalConfig(mc_samples=25)).evaluate_many(seed_sets, threads=4)
    assert serial == threaded


def test_eval_config_from_dict():
    cfg = EvalConfig.from_dict({"mc_samples": 50, "delay": "geometric:0.5", "mode": "once"})
    assert cfg.delay == DelayDistribution("geometric", 0.5)
    assert cfg.to_dict()["delay"] == {"kind": "geometric", "q": 0.5}
    assert EvalConfig.from_dict(cfg.to_dict()) == cfg


@pytest.mark.parametrize("data", [{"mc_samples": 0}, {"mode": "always"}, {"delay": {"kind": "geometric", "q": 0}}])
def test_eval_config_rejects(data):
    with pytest.raises(ConfigError):
        EvalConfig.from_dict(data)
