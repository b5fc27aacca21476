#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Tests for non-dominated sorting, crowding and selection."""
# Import built-in modules
import math
from types import SimpleNamespace

# Import third-party modules
import numpy as np
import pytest

# Import local modules
from seedopt.api.evolution import AlgoConfig
from seedopt.api.evolution import Individual
from seedopt.api.objectives import ObjectiveVector
from seedopt.api.objectives import dominates
from seedopt.api.selection import assign_rank_and_crowding
from seedopt.api.selection import crowding_distance
from seedopt.api.selection import environmental_selection
from seedopt.api.selection import fast_nondominated_sort
from seedopt.api.selection import tournament_selection
from seedopt.exceptions import SeedOptError
from seedopt.internal.rng import make_rng


def peel_oracle(points):
    """Repeatedly strip the points nobody remaining dominates."""
    remaining = list(range(len(points)))
    fronts = []
    while remaining:
        front = [i for i in remaining if not any(dominates(points[j], points[i]) for j in remaining)]
        fronts.append(front)
        remaining = [i for i in remaining if i not in front]
    return fronts


def individuals(vectors):
    return [Individual((i + 1,), objectives=ObjectiveVector(*v)) for i, v in enumerate(vectors)]


def test_single_point():
    assert fast_nondominated_sort([(0.0, 1.0, 2.0)]) == [[0]]


def test_chain():
    assert fast_nondominated_sort([(2, 2, 2), (1, 1, 1), (3, 3, 3)]) == [[1], [0], [2]]


def test_empty():
    assert fast_nondominated_sort([]) == []


@pytest.mark.parametrize("seed", range(5))
def test_sort_matches_peeling_oracle(seed):
    rng = np.random.default_rng(seed)
    points = [tuple(p) for p in rng.integers(0, 6, size=(50, 3)).tolist()]
    assert fast_nondominated_sort(points) == peel_oracle(points)


def test_objective_vectors_use_minimization():
    vectors = [ObjectiveVector(10, 3, 4), ObjectiveVector(10, 5, 4), ObjectiveVector(8, 4, 2)]
    assert fast_nondominated_sort(vectors) == [[0, 2], [1]]


def test_crowding_small_fronts_are_infinite():
    assert np.all(np.isinf(crowding_distance([(0, 0, 0), (1, 1, 1)])))
    assert np.all(np.isinf(crowding_distance([(0, 0, 0)])))


def test_crowding_collinear_middle():
    distances = crowding_distance([(0, 2, 0), (1, 1, 0), (2, 0, 0)])
    assert math.isinf(distances[0])
    assert math.isinf(distances[2])
    assert distances[1] == pytest.approx(2.0)


def test_crowding_identical_points():
    distances = crowding_distance([(1, 1, 1)] * 4)
    assert np.count_nonzero(np.isinf(distances)) == 2
    assert np.count_nonzero(distances == 0) == 2


def test_assign_rank_requires_evaluation():
    with pytest.raises(SeedOptError):
        assign_rank_and_crowding([Individual((1,))])


def test_tournament_single_individual():
    population = individuals([(5, 1, 1)])
    assign_rank_and_crowding(population)
    pool = tournament_selection(population, AlgoConfig(population_size=6), make_rng(0))
    assert len(pool) == 6
    assert all(member is population[0] for member in pool)


def test_tournament_prefers_lower_rank():
    best = SimpleNamespace(objectives=(0, 0, 0), rank=0, crowding=0.0)
    worst = SimpleNamespace(objectives=(1, 1, 1), rank=2, crowding=math.inf)
    pool = tournament_selection([best, worst], AlgoConfig(population_size=200, tournament_size=2), make_rng(1))
    # worst only wins a worst-vs-worst tournament, about one time in four
    assert sum(member is best for member in pool) > 120


def test_tournament_rule_is_forced():
    low_rank = SimpleNamespace(objectives=(0, 0, 0), rank=0, crowding=0.3)
    high_rank = SimpleNamespace(objectives=(1, 1, 1), rank=2, crowding=math.inf)
    boundary = SimpleNamespace(objectives=(0, 0, 0), rank=0, crowding=math.inf)
    interior = SimpleNamespace(objectives=(0, 0, 0), rank=0, crowding=0.3)
    cfg = AlgoConfig(population_size=2, tournament_size=2)
    for seed in range(50):
        rng = make_rng(seed)
        pool = tournament_selection([low_rank, high_rank], cfg, rng)
        contestants = make_rng(seed).integers(2, size=2)
        if set(contestants.tolist()) == {0, 1}:
            assert pool[0] is low_rank
        pool = tournament_selection([boundary, interior], cfg, make_rng(seed))
        contestants = make_rng(seed).integers(2, size=2)
        if set(contestants.tolist()) == {0, 1}:
            assert pool[0] is boundary


def test_environmental_selection_front_fits_exactly():
    population = individuals([(10, 1, 1), (9, 0, 1), (8, 0, 0), (7, 5, 5), (6, 6, 6), (5, 7, 7)])
    survivors = environmental_selection(population, AlgoConfig(population_size=4))
    assert len(survivors) == 4
    assert set(survivors[:3]) == set(population[:3])
    assert survivors[3] is population[3]


def test_environmental_selection_truncates_by_crowding():
    # seven mutually non-dominated points on a line in (spread, cost); N = 4 drops three
    population = individuals([(float(i), float(i), 0.0) for i in range(7)])
    survivors = environmental_selection(population, AlgoConfig(population_size=4))
    assert len(survivors) == 4
    kept = {member.seeds[0] for member in survivors}
    # the two extremes always survive
    assert {1, 7} <= kept


def test_environmental_selection_needs_enough_members():
    with pytest.raises(SeedOptError):
        environmental_selection(individuals([(1, 1, 1)]), AlgoConfig(population_size=2))


@pytest.mark.parametrize("seed", range(3))
def test_survivors_are_never_dominated_by_discarded(seed):
    rng = np.random.default_rng(seed)
    population = individuals([tuple(v) for v in rng.integers(0, 8, size=(20, 3)).tolist()])
    survivors = environmental_selection(population, AlgoConfig(population_size=10))
    kept = set(map(id, survivors))
    discarded = [member for member in population if id(member) not in kept]
    for survivor in survivors:
        for loser in discarded:
            assert not dominates(loser.objectives, survivor.objectives)
    assert all(member.rank is not None and member.crowding is not None for member in survivors)


def reference_crowding(points):
    count = len(points)
    if count <= 2:
        return [math.inf] * count
    distance = [0.0] * count
    for m in range(3):
        order = sorted(range(count), key=lambda i: points[i][m])
        distance[order[0]] = math.inf
        distance[order[-1]] = math.inf
        span = points[order[-1]][m] - points[order[0]][m]
        if span <= 0:
            continue
        for j in range(1, count - 1):
            distance[order[j]] += (points[order[j + 1]][m] - points[order[j - 1]][m]) / span
    return distance


def fast_peel(points):
    """Peeling oracle over a pairwise comparison table, for large populations."""
    points = np.asarray(points, dtype=float)
    remaining = np.arange(len(points))
    fronts = []
    while len(remaining):
        sub = points[remaining]
        no_worse = np.all(sub[:, None] <= sub[None], axis=2)
        better = np.any(sub[:, None] < sub[None], axis=2)
        dominated = (no_worse & better).any(axis=0)
        fronts.append(remaining[~dominated].tolist())
        remaining = remaining[dominated]
    return fronts


def reference_selection(population, size):
    fronts = fast_peel([member.objectives.minimization for member in population])
    survivors = []
    for front in fronts:
        if len(survivors) + len(front) <= size:
            survivors.extend(front)
            continue
        distances = reference_crowding([population[i].objectives.minimization for i in front])
        ordered = [front[j] for j in sorted(range(len(front)), key=lambda j: -distances[j])]
        survivors.extend(ordered[:size - len(survivors)])
        break
    return survivors


@pytest.mark.slow
def test_selection_machinery_matches_brute_force():
    # Import local modules
    from seedopt.api.metrics import extract_pareto_front

    rng = np.random.default_rng(99)
    for _ in range(1000):
        count = int(rng.integers(2, 201))
        values = rng.integers(0, 12, size=(count, 3)).tolist()
        points = [tuple(v) for v in values]
        fronts = fast_nondominated_sort(points)
        assert fronts == fast_peel(points)
        for front in fronts:
            np.testing.assert_allclose(crowding_distance([points[i] for i in front]),
                                       reference_crowding([points[i] for i in front]))
        expected_front = []
        for i in fronts[0]:
            if points[i] not in expected_front:
                expected_front.append(points[i])
        assert extract_pareto_front(points) == expected_front
        population = individuals([(v[0], v[1], v[2]) for v in values])
        size = 2 * int(rng.integers(1, count // 2 + 1))
        survivors = environmental_selection(population, AlgoConfig(population_size=size))
        assert [id(member) for member in survivors] == \
            [id(population[i]) for i in reference_selection(population, size)]
