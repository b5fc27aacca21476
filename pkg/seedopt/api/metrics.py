#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Pareto fronts, normalisation, exact 3-D hypervolume and convergence traces.

Hypervolume is always computed on normalised minimization triples
``(-spread, cost, time)`` mapped into ``[0, 1]^3`` by a :class:`NormalizationBounds`
and measured against the reference point ``(1.1, 1.1, 1.1)`` unless stated.
"""
# Import built-in modules
import bisect
from dataclasses import dataclass
import logging
import math
import warnings

# Import third-party modules
import numpy as np
from scipy import stats

# Import local modules
from seedopt.api.objectives import ObjectiveVector
from seedopt.api.selection import dominance_matrix
from seedopt.api.selection import objective_matrix
from seedopt.constants import CONVERGENCE_FRACTION
from seedopt.constants import DEFAULT_REFERENCE
from seedopt.constants import FRONT_HEADER
from seedopt.constants import OBJECTIVE_NAMES
from seedopt.constants import ZERO_RANGE_VALUE
from seedopt.exceptions import ConfigError
from seedopt.exceptions import GraphFormatError
from seedopt.exceptions import HypervolumeError
from seedopt.internal.filesystem import read_csv
from seedopt.internal.filesystem import write_csv


logger = logging.getLogger(__name__)


def _vector_of(item):
    return getattr(item, "objectives", item)


def extract_pareto_front(population):
    """Maximal non-dominated subset, duplicates collapsed, input order kept.

    Args:
        population: ObjectiveVectors, minimization sequences, or individuals
            carrying an ``objectives`` attribute

    Returns:
        list: The surviving items of ``population``
    """
    items = list(population)
    if not items:
        return []
    points = objective_matrix([_vector_of(item) for item in items])
    dominated = dominance_matrix(points).any(axis=0)
    front = []
    seen = set()
    for item, point, is_dominated in zip(items, points, dominated):
        key = tuple(point.tolist())
        if is_dominated or key in seen:
            continue
        seen.add(key)
        front.append(item)
    return front


@dataclass(frozen=True)
class NormalizationBounds:
    """Per-objective ``(min, max)`` in minimization orientation.

    ``lower``/``upper`` are triples over ``(-spread, cost, time)``; serialised form
    uses the natural ``influence``/``cost``/``time`` ranges.
    """

    lower: tuple
    upper: tuple

    def __post_init__(self):
        errors = []
        if len(self.lower) != 3 or len(self.upper) != 3:
            errors.append("bounds need three objectives")
        else:
            for name, low, high in zip(OBJECTIVE_NAMES, self.lower, self.upper):
                if not (math.isfinite(low) and math.isfinite(high)) or high < low:
                    errors.append("invalid %s bounds (%r, %r)" % (name, low, high))
        if errors:
            raise ConfigError(errors)

    @classmethod
    def from_points(cls, points):
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if not len(points):
            raise ConfigError("Cannot derive normalisation bounds from an empty point set")
        return cls(tuple(points.min(axis=0).tolist()), tuple(points.max(axis=0).tolist()))

    @classmethod
    def from_fronts(cls, fronts):
        """Bounds over the union of several fronts (e.g. every algorithm's final front)."""
        return cls.from_points(objective_matrix([_vector_of(item) for front in fronts for item in front]))

    @classmethod
    def from_problem(cls, g, max_seeds, delay=None):
        """A-priori bounds for in-run traces.

        Spread lies in ``[0, n]`` and cost in ``[0, sum of the max_seeds largest
        costs]``. Time is bounded by ``(n - 1) / q``, exact for unit delays and the
        expected longest chain for geometric delays; larger estimates are clipped.
        """
        n = g.node_count
        top_costs = np.sort(g.costs)[::-1][:max_seeds]
        q = 1.0 if delay is None or delay.is_unit else delay.q
        time_bound = max(n - 1, 0) / q
        return cls((-float(n), 0.0, 0.0), (0.0, math.fsum(top_costs.tolist()), time_bound))

    def to_dict(self):
        return {
            "influence": [-self.upper[0] + 0.0, -self.lower[0] + 0.0],
            "cost": [self.lower[1], self.upper[1]],
            "time": [self.lower[2], self.upper[2]],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            influence, cost, time = data["influence"], data["cost"], data["time"]
            return cls((-float(influence[1]), float(cost[0]), float(time[0])),
                       (-float(influence[0]), float(cost[1]), float(time[1])))
        except (KeyError, TypeError, IndexError, ValueError) as e:
            raise ConfigError("malformed normalisation bounds: %s" % e)


def clipped_count(front, bounds):
    """Number of points lying outside ``bounds`` in at least one objective."""
    points = objective_matrix([_vector_of(item) for item in front])
    if not len(points):
        return 0
    lower = np.asarray(bounds.lower)
    upper = np.asarray(bounds.upper)
    return int(np.any((points < lower) | (points > upper), axis=1).sum())


def normalize(front, bounds, warn=True):
    """Map a front affinely into ``[0, 1]^3`` (minimization orientation).

    Zero-range objectives map to 0.5. Points outside the bounds are clipped and
    reported in a single warning with their count.

    Returns:
        numpy.ndarray: ``(k, 3)`` normalised points
    """
    points = objective_matrix([_vector_of(item) for item in front])
    if not len(points):
        return points
    lower = np.asarray(bounds.lower)
    span = np.asarray(bounds.upper) - lower
    clipped = clipped_count(front, bounds)
    if clipped and warn:
        logger.warning("Clipped %d point(s) outside the normalisation bounds", clipped)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(span > 0, (points - lower) / np.where(span > 0, span, 1.0), ZERO_RANGE_VALUE)
    return np.clip(scaled, 0.0, 1.0)


def _reference(ref):
    if ref is None:
        ref = DEFAULT_REFERENCE
    if np.isscalar(ref):
        ref = (ref, ref, ref)
    return tuple(float(r) for r in ref)


def hypervolume_3d(front, ref=None):
    """Exact volume dominated by ``front`` and bounded by ``ref``.

    Sweeps the points in ascending first coordinate while keeping the 2-D
    staircase of the other two coordinates and its area up to date.

    Args:
        front: ``(k, 3)`` normalised minimization points
        ref: Reference point or scalar; default ``1.1`` in every coordinate

    Raises:
        HypervolumeError: If any point exceeds the reference point
    """
    rx, ry, rz = ref = _reference(ref)
    points = np.asarray(front, dtype=np.float64).reshape(-1, 3)
    if not len(points):
        return 0.0
    beyond = np.flatnonzero(np.any(points > np.asarray(ref), axis=1))
    if len(beyond):
        raise HypervolumeError([(int(i), points[i].tolist()) for i in beyond], ref)

    points = points[np.argsort(points[:, 0], kind="stable")]
    ys, zs = [], []
    area = 0.0
    volume = 0.0
    for index, (x, y, z) in enumerate(points.tolist()):
        pos = bisect.bisect_left(ys, y)
        dominated = (pos > 0 and zs[pos - 1] <= z) or (pos < len(ys) and ys[pos] == y and zs[pos] <= z)
        if not dominated:
            end = pos
            while end < len(ys) and zs[end] >= z:
                end += 1
            level = zs[pos - 1] if pos > 0 else rz
            cursor = y
            for i in range(pos, end):
                area += (ys[i] - cursor) * (level - z)
                cursor, level = ys[i], zs[i]
            area += ((ys[end] if end < len(ys) else ry) - cursor) * (level - z)
            ys[pos:end] = [y]
            zs[pos:end] = [z]
        next_x = float(points[index + 1, 0]) if index + 1 < len(points) else rx
        volume += area * (next_x - x)
    return volume


def front_hypervolume(front, bounds, ref=None, warn=True):
    """Hypervolume of the non-dominated part of ``front`` after normalisation."""
    return hypervolume_3d(normalize(extract_pareto_front(front), bounds, warn=warn), ref)


def convergence_trace(run, bounds=None, ref=None):
    """Front-0 hypervolume after every generation of a run.

    Without ``bounds`` the trace recorded during the run is returned; with bounds
    (e.g. frozen across an experiment) it is recomputed from the stored fronts.
    Runs in ``once`` evaluation mode store archive fronts, so either trace is
    non-decreasing.

    Returns:
        list: ``(generation, hv)`` pairs
    """
    if bounds is None:
        return list(enumerate(run.hv_trace))
    return [(generation, front_hypervolume(front, bounds, ref, warn=False))
            for generation, front in enumerate(run.fronts)]


def generations_to_fraction(trace, fraction=CONVERGENCE_FRACTION):
    """First generation whose HV reaches ``fraction`` of the final HV."""
    if not trace:
        return None
    target = fraction * trace[-1][1]
    for generation, hv in trace:
        if hv >= target:
            return generation
    return trace[-1][0]


def hv_at(trace, generations):
    """HV at checkpoint generations; None for checkpoints past the end of the run."""
    lookup = dict(trace)
    return {generation: lookup.get(generation) for generation in generations}


def objective_correlations(front):
    """Spearman rank correlations between the three objectives on a front.

    Returns:
        dict: ``"influence~cost"``-style keys to rho, None where undefined
    """
    rows = np.asarray([_vector_of(item).as_row() for item in front], dtype=np.float64).reshape(-1, 3)
    correlations = {}
    for i in range(3):
        for j in range(i + 1, 3):
            rho = None
            if len(rows) >= 3 and np.ptp(rows[:, i]) > 0 and np.ptp(rows[:, j]) > 0:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    value = float(stats.spearmanr(rows[:, i], rows[:, j])[0])
                rho = value if math.isfinite(value) else None
            correlations["%s~%s" % (OBJECTIVE_NAMES[i], OBJECTIVE_NAMES[j])] = rho
    return correlations


def select_feasible(front, budget=None, deadline=None):
    """Members with cost within ``budget`` and time within ``deadline``, best spread first."""
    feasible = [
        item for item in front
        if (budget is None or _vector_of(item).cost <= budget)
        and (deadline is None or _vector_of(item).time <= deadline)
    ]
    return sorted(feasible, key=lambda item: (-_vector_of(item).spread, _vector_of(item).cost,
                                              _vector_of(item).time))


def write_front_csv(path, fronts, hv_trace, config_hash, seed):
    """Write every generation's front as ``generation,influence,cost,time,hv`` rows."""
    rows = []
    for generation, (front, hv) in enumerate(zip(fronts, hv_trace)):
        for item in front:
            rows.append((generation,) + tuple(float(v) for v in _vector_of(item).as_row()) + (float(hv),))
    write_csv(path, FRONT_HEADER, rows, comments=["config_hash=%s seed=%d" % (config_hash, seed)])


def read_front_csv(path):
    """Read a front file.

    Returns:
        tuple: (metadata dict from the comment line, list of fronts indexed by generation)

    Raises:
        GraphFormatError: If the header or a row is malformed
    """
    comments, header, rows = read_csv(path)
    if tuple(header) != FRONT_HEADER:
        raise GraphFormatError(path, reason="expected header %s" % ",".join(FRONT_HEADER))
    metadata = {}
    for comment in comments:
        for token in comment.split():
            key, sep, value = token.partition("=")
            if sep:
                metadata[key] = value
    fronts = []
    for line_number, row in enumerate(rows, 2 + len(comments)):
        try:
            generation = int(row[0])
            vector = ObjectiveVector(float(row[1]), float(row[2]), float(row[3]))
        except (IndexError, ValueError) as e:
            raise GraphFormatError(path, line_number, str(e))
        while len(fronts) <= generation:
            fronts.append([])
        fronts[generation].append(vector)
    return metadata, fronts
