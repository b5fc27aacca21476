#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Latency-aware independent cascade simulation.

A cascade is driven by a live-edge realization: every arc ``(u, v)`` gets one coin
flip with probability ``p_uv`` and one sampled delay, drawn in arc order from the
cascade's random stream. Activation times are then the earliest arrival times from
the seeds over live arcs, which is exactly what the event-driven process yields when
each newly active node attempts each out-neighbour once and a node keeps its
earliest successful activation time.

:func:`simulate_cascade` runs the event-driven process for one realization.
:func:`estimate_objectives_mc` evaluates ``R`` realizations at once as a single
multi-source shortest path problem on their block-diagonal union; realization ``i``
always comes from ``derive(base_seed, i)``, so both paths agree cascade by cascade.
"""
# Import built-in modules
from dataclasses import dataclass
from dataclasses import field
import heapq
import itertools
import json
import logging

# Import third-party modules
import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

# Import local modules
from seedopt.constants import DELAY_GEOMETRIC
from seedopt.constants import DELAY_KINDS
from seedopt.constants import DELAY_UNIT
from seedopt.constants import EXACT_ORACLE_EDGE_LIMIT
from seedopt.exceptions import ConfigError
from seedopt.exceptions import NodeIndexError
from seedopt.exceptions import OracleLimitError
from seedopt.exceptions import SeedSetError
from seedopt.internal.filesystem import write_file
from seedopt.internal.rng import make_rng


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DelayDistribution:
    """Per-hop activation delay: ``unit`` (always 1) or ``geometric(q)`` on {1, 2, ...}."""

    kind: str = DELAY_UNIT
    q: float = 1.0

    def validate(self):
        errors = []
        if self.kind not in DELAY_KINDS:
            errors.append("delay kind must be one of %s, got %r" % (DELAY_KINDS, self.kind))
        if self.kind == DELAY_GEOMETRIC and not 0.0 < self.q <= 1.0:
            errors.append("geometric delay parameter q must lie in (0, 1], got %r" % self.q)
        if errors:
            raise ConfigError(errors)
        return self

    @property
    def is_unit(self):
        return self.kind == DELAY_UNIT or self.q == 1.0

    def sample(self, rng, size):
        """Draw ``size`` integer delays, each at least 1."""
        if self.kind == DELAY_UNIT:
            return np.ones(size, dtype=np.int64)
        return rng.geometric(self.q, size=size).astype(np.int64)

    @classmethod
    def parse(cls, text):
        """Parse ``unit`` or ``geometric:Q``."""
        text = text.strip()
        if text == DELAY_UNIT:
            return cls()
        kind, _, value = text.partition(":")
        if kind == DELAY_GEOMETRIC and value:
            try:
                return cls(DELAY_GEOMETRIC, float(value)).validate()
            except ValueError:
                pass
        raise ConfigError("unrecognised delay distribution %r (use 'unit' or 'geometric:Q')" % text)

    def to_dict(self):
        if self.kind == DELAY_GEOMETRIC:
            return {"kind": self.kind, "q": self.q}
        return {"kind": self.kind}

    @classmethod
    def from_dict(cls, data):
        return cls(data.get("kind", DELAY_UNIT), float(data.get("q", 1.0))).validate()


@dataclass
class CascadeResult:
    """Outcome of one cascade."""

    activation_time: dict
    trace: list = field(default_factory=list)

    @property
    def activated(self):
        return frozenset(self.activation_time)

    @property
    def spread(self):
        return len(self.activation_time)

    @property
    def finish_time(self):
        return max(self.activation_time.values()) if self.activation_time else 0


def check_seeds(g, seeds):
    """Validate a seed set and return it as a sorted int64 array.

    Raises:
        SeedSetError: If the set is empty or has duplicates
        NodeIndexError: If an id is out of range
    """
    array = np.asarray(list(seeds), dtype=np.int64)
    if array.size == 0:
        raise SeedSetError("Seed set must contain at least one node")
    bad = array[(array < 0) | (array >= g.node_count)]
    if bad.size:
        raise NodeIndexError(int(bad[0]), g.node_count)
    array = np.sort(array)
    if np.any(array[1:] == array[:-1]):
        raise SeedSetError("Seed set contains duplicate nodes")
    return array


def sample_realization(g, delay, rng):
    """Draw one live-edge realization.

    Returns:
        tuple: (live arc mask, per-arc integer delays)
    """
    live = rng.random(g.arc_count) < g.probabilities
    delays = delay.sample(rng, g.arc_count)
    return live, delays


def simulate_cascade(g, seeds, delay=None, rng=None, trace=False):
    """Simulate one cascade with the event-driven process.

    Args:
        g: Graph
        seeds: Nonempty, duplicate-free node ids
        delay: :class:`DelayDistribution`, default unit delays
        rng: ``numpy.random.Generator``
        trace: Record ``(node, time, activating arc)`` events

    Returns:
        CascadeResult: Activation times keyed by node
    """
    seeds = check_seeds(g, seeds)
    delay = delay or DelayDistribution()
    rng = rng if rng is not None else np.random.default_rng()
    live, delays = sample_realization(g, delay, rng)

    activation_time = {}
    events = []
    queue = [(0, int(v), -1) for v in seeds]
    heapq.heapify(queue)
    while queue:
        time, v, arc = heapq.heappop(queue)
        if v in activation_time:
            continue
        activation_time[v] = time
        if trace:
            edge = None if arc < 0 else [int(g.sources[arc]), v]
            events.append({"node": v, "time": time, "edge": edge})
        for a in range(g.out_offsets[v], g.out_offsets[v + 1]):
            w = int(g.targets[a])
            if live[a] and w not in activation_time:
                heapq.heappush(queue, (time + int(delays[a]), w, a))
    return CascadeResult(activation_time, events)


def dump_trace(result, path):
    """Write cascade trace events as JSON lines."""
    write_file(path, "".join(json.dumps(event, sort_keys=True) + "\n" for event in result.trace))


class RealizationBank(object):
    """``R`` live-edge realizations stacked into one block-diagonal sparse graph.

    Building the bank once per base seed lets every candidate seed set of a
    generation be scored against the same realizations (common random numbers).
    """

    def __init__(self, g, samples, delay=None, base_seed=0):
        if samples < 1:
            raise ConfigError("Monte Carlo sample count must be >= 1, got %r" % samples)
        self.graph = g
        self.samples = int(samples)
        self.delay = delay or DelayDistribution()
        self.base_seed = int(base_seed)

        n = g.node_count
        rows, cols, data = [], [], []
        for i in range(self.samples):
            live, delays = sample_realization(g, self.delay, make_rng(self.base_seed, i))
            rows.append(g.sources[live] + i * n)
            cols.append(g.targets[live] + i * n)
            data.append(delays[live].astype(np.float64))
        size = n * self.samples
        self.matrix = sparse.csr_matrix((np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
                                        shape=(size, size))

    def outcomes(self, seeds):
        """Per-realization spreads and finish times.

        Returns:
            tuple: (spreads, finish_times) arrays of length ``samples``
        """
        seeds = check_seeds(self.graph, seeds)
        n = self.graph.node_count
        indices = (seeds[None, :] + n * np.arange(self.samples)[:, None]).ravel()
        distances = csgraph.dijkstra(self.matrix, directed=True, indices=indices, min_only=True)
        distances = distances.reshape(self.samples, n)
        reached = np.isfinite(distances)
        spreads = reached.sum(axis=1).astype(np.float64)
        finish_times = np.where(reached, distances, 0.0).max(axis=1)
        return spreads, finish_times


def estimate_objectives_mc(g, seeds, samples, delay=None, base_seed=0, bank=None):
    """Monte Carlo estimate of expected spread and expected finish time.

    Args:
        g: Graph
        seeds: Seed set
        samples: Number of cascades ``R``
        delay: :class:`DelayDistribution`
        base_seed: Cascade ``i`` uses ``derive(base_seed, i)``
        bank: Optional prebuilt :class:`RealizationBank` for the same arguments

    Returns:
        tuple: (mean_spread, mean_finish_time)
    """
    if bank is None:
        bank = RealizationBank(g, samples, delay, base_seed)
    spreads, finish_times = bank.outcomes(seeds)
    return float(spreads.mean()), float(finish_times.mean())


def exact_expectation(g, seeds, delay=None):
    """Exact expected spread and finish time under unit delays.

    Enumerates every live-edge subgraph over the arcs with ``0 < p_uv < 1``; arcs with
    ``p = 1`` are always live and arcs with ``p = 0`` never are.

    Raises:
        OracleLimitError: If the graph has more than ``EXACT_ORACLE_EDGE_LIMIT`` arcs or
            the delay distribution is not unit
    """
    delay = delay or DelayDistribution()
    if not delay.is_unit:
        raise OracleLimitError("Exact expectation supports unit delays only")
    if g.arc_count > EXACT_ORACLE_EDGE_LIMIT:
        raise OracleLimitError("Exact expectation limited to %d arcs, graph has %d"
                               % (EXACT_ORACLE_EDGE_LIMIT, g.arc_count))
    seeds = check_seeds(g, seeds)

    probabilities = g.probabilities
    always = probabilities >= 1.0
    uncertain = np.flatnonzero((probabilities > 0.0) & ~always)
    expected_spread = 0.0
    expected_finish = 0.0
    for states in itertools.product((False, True), repeat=len(uncertain)):
        live = always.copy()
        weight = 1.0
        for arc, state in zip(uncertain, states):
            live[arc] = state
            weight *= probabilities[arc] if state else 1.0 - probabilities[arc]
        spread, finish = _bfs_outcome(g, seeds, live)
        expected_spread += weight * spread
        expected_finish += weight * finish
    return expected_spread, expected_finish


def _bfs_outcome(g, seeds, live):
    depth = {int(v): 0 for v in seeds}
    frontier = list(depth)
    while frontier:
        following = []
        for u in frontier:
            for a in range(g.out_offsets[u], g.out_offsets[u + 1]):
                w = int(g.targets[a])
                if live[a] and w not in depth:
                    depth[w] = depth[u] + 1
                    following.append(w)
        frontier = following
    return len(depth), max(depth.values())
