#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""NSGA-II ranking and selection.

Everything here works on minimization triples; :class:`ObjectiveVector` inputs are
converted with :attr:`ObjectiveVector.minimization`. Individuals are any objects
with ``objectives``, ``rank`` and ``crowding`` attributes.
"""
# Import built-in modules
import logging
import math

# Import third-party modules
import numpy as np

# Import local modules
from seedopt.api.objectives import ObjectiveVector
from seedopt.exceptions import SeedOptError


logger = logging.getLogger(__name__)


def objective_matrix(vectors):
    """Stack vectors into an ``(n, 3)`` float array in minimization orientation."""
    rows = [v.minimization if isinstance(v, ObjectiveVector) else tuple(v) for v in vectors]
    if not rows:
        return np.empty((0, 3))
    return np.asarray(rows, dtype=np.float64)


def dominance_matrix(points):
    """``D[i, j]`` is True iff point ``i`` dominates point ``j``."""
    no_worse = np.all(points[:, None, :] <= points[None, :, :], axis=2)
    better = np.any(points[:, None, :] < points[None, :, :], axis=2)
    return no_worse & better


def fast_nondominated_sort(vectors):
    """Partition vectors into non-dominated fronts.

    Args:
        vectors: ObjectiveVectors or minimization sequences

    Returns:
        list: Fronts as ascending lists of input indices, best front first
    """
    points = objective_matrix(vectors)
    if not len(points):
        return []
    dominates = dominance_matrix(points)
    dominated_by = dominates.sum(axis=0)
    fronts = []
    current = np.flatnonzero(dominated_by == 0)
    while len(current):
        fronts.append(current.tolist())
        dominated_by = dominated_by - dominates[current].sum(axis=0)
        dominated_by[current] = -1
        current = np.flatnonzero(dominated_by == 0)
    return fronts


def crowding_distance(front):
    """NSGA-II crowding distance of each member of one front.

    Boundary members of each objective get infinity; interior members add the
    normalised gap between their neighbours. Objectives with zero range add nothing.

    Returns:
        numpy.ndarray: One distance per member
    """
    points = objective_matrix(front)
    count = len(points)
    distance = np.zeros(count)
    if count <= 2:
        distance[:] = math.inf
        return distance
    for m in range(points.shape[1]):
        order = np.argsort(points[:, m], kind="stable")
        values = points[order, m]
        distance[order[0]] = math.inf
        distance[order[-1]] = math.inf
        spread = values[-1] - values[0]
        if spread <= 0:
            continue
        distance[order[1:-1]] += (values[2:] - values[:-2]) / spread
    return distance


def _require_evaluated(population):
    for index, individual in enumerate(population):
        if individual.objectives is None:
            raise SeedOptError("Individual #%d has not been evaluated" % index)


def assign_rank_and_crowding(population):
    """Set ``rank`` and ``crowding`` on every individual; returns the fronts."""
    _require_evaluated(population)
    fronts = fast_nondominated_sort([individual.objectives for individual in population])
    for rank, front in enumerate(fronts):
        distances = crowding_distance([population[i].objectives for i in front])
        for i, distance in zip(front, distances):
            population[i].rank = rank
            population[i].crowding = float(distance)
    return fronts


def _better(a, b):
    if a.rank != b.rank:
        return a.rank < b.rank
    return a.crowding > b.crowding


def tournament_selection(population, cfg, rng):
    """Fill a mating pool of ``cfg.population_size`` by tournaments with replacement.

    The winner has the lower rank, then the larger crowding distance; remaining
    ties are settled uniformly at random.
    """
    _require_evaluated(population)
    for index, individual in enumerate(population):
        if individual.rank is None or individual.crowding is None:
            raise SeedOptError("Individual #%d has no rank or crowding distance" % index)
    pool = []
    for _ in range(cfg.population_size):
        contestants = rng.integers(len(population), size=cfg.tournament_size)
        best = [int(contestants[0])]
        for c in contestants[1:]:
            challenger = population[int(c)]
            incumbent = population[best[0]]
            if _better(challenger, incumbent):
                best = [int(c)]
            elif not _better(incumbent, challenger):
                best.append(int(c))
        winner = best[0] if len(best) == 1 else best[int(rng.integers(len(best)))]
        pool.append(population[winner])
    return pool


def environmental_selection(combined, cfg):
    """Elitist truncation of parents plus offspring to ``cfg.population_size``.

    Fronts are admitted whole in rank order; the front that does not fit is cut by
    descending crowding distance, keeping input order among equal distances.
    Ranks and crowding are recomputed on the survivors.

    Raises:
        SeedOptError: If fewer individuals than the population size are given
    """
    size = cfg.population_size
    if len(combined) < size:
        raise SeedOptError("Environmental selection needs at least %d individuals, got %d"
                           % (size, len(combined)))
    fronts = assign_rank_and_crowding(combined)
    survivors = []
    for front in fronts:
        if len(survivors) + len(front) <= size:
            survivors.extend(combined[i] for i in front)
            if len(survivors) == size:
                break
            continue
        ordered = sorted(front, key=lambda i: -combined[i].crowding)
        survivors.extend(combined[i] for i in ordered[:size - len(survivors)])
        break
    assign_rank_and_crowding(survivors)
    return survivors
