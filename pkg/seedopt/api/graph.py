#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Directed social networks with propagation probabilities and activation costs.

A :class:`Graph` is immutable once built. Node ids are dense integers in
``[0, node_count)``; the original ids of the source file are kept in
``original_ids`` for reporting. Arcs are stored sorted by ``(source, target)`` so
the out-arcs of node ``v`` are the contiguous slice
``out_offsets[v]:out_offsets[v + 1]``.
"""
# Import built-in modules
from collections import deque
from dataclasses import dataclass
import hashlib
import logging
import os

# Import third-party modules
import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

# Import local modules
from seedopt.constants import COMMENT_PREFIX
from seedopt.constants import COST_DEGREE
from seedopt.constants import COST_FILE
from seedopt.constants import COST_KINDS
from seedopt.constants import COST_UNIT
from seedopt.constants import PROB_CONSTANT
from seedopt.constants import PROB_KINDS
from seedopt.constants import PROB_WEIGHTED_CASCADE
from seedopt.exceptions import ConfigError
from seedopt.exceptions import DatasetNotFoundError
from seedopt.exceptions import EmptyGraphError
from seedopt.exceptions import GraphFormatError
from seedopt.exceptions import NodeIndexError
from seedopt.internal.rng import make_rng


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProbabilityModel:
    """How propagation probabilities ``p_uv`` are assigned to arcs."""

    kind: str = PROB_WEIGHTED_CASCADE
    value: float = 0.0

    def validate(self):
        errors = []
        if self.kind not in PROB_KINDS:
            errors.append("probability kind must be one of %s, got %r" % (PROB_KINDS, self.kind))
        if self.kind == PROB_CONSTANT and not 0.0 <= self.value <= 1.0:
            errors.append("constant probability must lie in [0, 1], got %r" % self.value)
        if errors:
            raise ConfigError(errors)
        return self

    @classmethod
    def parse(cls, text):
        """Parse ``wc``, ``weighted-cascade`` or ``const:P`` / ``constant:P``."""
        text = text.strip()
        if text in ("wc", PROB_WEIGHTED_CASCADE):
            return cls(PROB_WEIGHTED_CASCADE)
        kind, _, value = text.partition(":")
        if kind in ("const", PROB_CONSTANT) and value:
            try:
                return cls(PROB_CONSTANT, float(value)).validate()
            except ValueError:
                pass
        raise ConfigError("unrecognised probability model %r (use 'wc' or 'const:P')" % text)

    def assign(self, targets, node_count):
        """Return the probability array for arcs with the given targets."""
        if self.kind == PROB_CONSTANT:
            return np.full(len(targets), float(self.value), dtype=np.float64)
        in_degree = np.bincount(targets, minlength=node_count)
        return 1.0 / in_degree[targets].astype(np.float64)

    def to_dict(self):
        if self.kind == PROB_CONSTANT:
            return {"kind": self.kind, "value": self.value}
        return {"kind": self.kind}

    @classmethod
    def from_dict(cls, data):
        return cls(data.get("kind", PROB_WEIGHTED_CASCADE), float(data.get("value", 0.0))).validate()


@dataclass(frozen=True)
class CostModel:
    """How activation costs ``c_i`` are assigned to nodes."""

    kind: str = COST_DEGREE
    path: str = None

    def validate(self):
        errors = []
        if self.kind not in COST_KINDS:
            errors.append("cost kind must be one of %s, got %r" % (COST_KINDS, self.kind))
        if self.kind == COST_FILE and not self.path:
            errors.append("cost kind 'file' requires a path")
        if errors:
            raise ConfigError(errors)
        return self

    @classmethod
    def parse(cls, text):
        """Parse ``degree``, ``unit`` or ``file:PATH``."""
        text = text.strip()
        if text in (COST_DEGREE, COST_UNIT):
            return cls(text)
        kind, _, path = text.partition(":")
        if kind == COST_FILE and path:
            return cls(COST_FILE, path)
        raise ConfigError("unrecognised cost model %r (use 'degree', 'unit' or 'file:PATH')" % text)

    def assign(self, sources, targets, node_count, directed, original_ids):
        """Return the per-node cost array."""
        if self.kind == COST_UNIT:
            return np.ones(node_count, dtype=np.float64)
        if self.kind == COST_DEGREE:
            out_degree = np.bincount(sources, minlength=node_count)
            if not directed:
                # Each undirected neighbour appears once as an out-arc.
                return out_degree.astype(np.float64)
            in_degree = np.bincount(targets, minlength=node_count)
            return (out_degree + in_degree).astype(np.float64)
        return load_costs(self.path, original_ids)

    def to_dict(self):
        if self.kind == COST_FILE:
            return {"kind": self.kind, "path": self.path}
        return {"kind": self.kind}

    @classmethod
    def from_dict(cls, data):
        return cls(data.get("kind", COST_DEGREE), data.get("path")).validate()


class Graph(object):
    """Immutable directed graph ``G = (V, E, C)``.

    Example usage:
        >>> g = load_edge_list("facebook_combined.txt", directed=False)
        >>> g.node_count, g.arc_count
        (4039, 176468)
        >>> g.degree(0)
        (347, 347)
    """

    def __init__(self, node_count, sources, targets, probabilities, costs, original_ids=None,
                 directed=True, prob_model=None, cost_model=None):
        """Build a graph and check its invariants.

        Args:
            node_count: Number of nodes, at least 1
            sources: Arc source ids
            targets: Arc target ids
            probabilities: Per-arc propagation probabilities in [0, 1]
            costs: Per-node nonnegative activation costs
            original_ids: Optional ids of the source file, defaults to ``range(node_count)``
            directed: False when the arcs are the symmetrization of an undirected input
            prob_model: The :class:`ProbabilityModel` that produced ``probabilities``
            cost_model: The :class:`CostModel` that produced ``costs``

        Raises:
            ValueError: If an invariant does not hold
        """
        if node_count < 1:
            raise ValueError("Graph needs at least one node")
        sources = np.asarray(sources, dtype=np.int64)
        targets = np.asarray(targets, dtype=np.int64)
        probabilities = np.asarray(probabilities, dtype=np.float64)
        costs = np.asarray(costs, dtype=np.float64)
        if original_ids is None:
            original_ids = np.arange(node_count, dtype=np.int64)
        original_ids = np.asarray(original_ids, dtype=np.int64)

        if not (len(sources) == len(targets) == len(probabilities)):
            raise ValueError("Arc arrays must have equal length")
        if len(costs) != node_count or len(original_ids) != node_count:
            raise ValueError("Per-node arrays must have node_count entries")
        if len(sources) and (sources.min() < 0 or targets.min() < 0
                             or sources.max() >= node_count or targets.max() >= node_count):
            raise ValueError("Arc endpoints must lie in [0, %d)" % node_count)
        if np.any(~np.isfinite(probabilities)) or np.any((probabilities < 0.0) | (probabilities > 1.0)):
            raise ValueError("Every p_uv must lie in [0, 1]")
        if np.any(~np.isfinite(costs)) or np.any(costs < 0.0):
            raise ValueError("Every c_i must be finite and >= 0")

        order = np.lexsort((targets, sources))
        sources, targets, probabilities = sources[order], targets[order], probabilities[order]
        keys = sources * node_count + targets
        if len(keys) > 1 and np.any(keys[1:] == keys[:-1]):
            raise ValueError("Duplicate directed arcs are not allowed")

        self.node_count = int(node_count)
        self.directed = bool(directed)
        self.prob_model = prob_model or ProbabilityModel()
        self.cost_model = cost_model or CostModel()
        self.sources = _frozen(sources)
        self.targets = _frozen(targets)
        self.probabilities = _frozen(probabilities)
        self.costs = _frozen(costs)
        self.original_ids = _frozen(original_ids)

        self.out_offsets = _frozen(np.searchsorted(sources, np.arange(node_count + 1)))
        in_order = np.argsort(targets, kind="stable")
        self.in_arcs = _frozen(in_order)
        self.in_offsets = _frozen(np.searchsorted(targets[in_order], np.arange(node_count + 1)))
        self._out_adjacency = None
        self._in_adjacency = None
        self._fingerprint = None

    @property
    def arc_count(self):
        return len(self.sources)

    @property
    def edges(self):
        """List of ``(source, target, p_uv)`` arcs."""
        return [(int(u), int(v), float(p)) for u, v, p in zip(self.sources, self.targets, self.probabilities)]

    @property
    def out_adjacency(self):
        if self._out_adjacency is None:
            self._out_adjacency = [self.targets[self.out_offsets[v]:self.out_offsets[v + 1]].tolist()
                                   for v in range(self.node_count)]
        return self._out_adjacency

    @property
    def in_adjacency(self):
        if self._in_adjacency is None:
            sources = self.sources[self.in_arcs]
            self._in_adjacency = [sources[self.in_offsets[v]:self.in_offsets[v + 1]].tolist()
                                  for v in range(self.node_count)]
        return self._in_adjacency

    @property
    def in_degrees(self):
        return np.diff(self.in_offsets)

    @property
    def out_degrees(self):
        return np.diff(self.out_offsets)

    @property
    def fingerprint(self):
        """Hash binding derived artifacts (embeddings, runs) to this exact graph."""
        if self._fingerprint is None:
            digest = hashlib.sha256()
            digest.update(np.int64(self.node_count).tobytes())
            for array, dtype in ((self.sources, "<i8"), (self.targets, "<i8"),
                                 (self.probabilities, "<f8"), (self.costs, "<f8")):
                digest.update(np.ascontiguousarray(array, dtype=dtype).tobytes())
            self._fingerprint = digest.hexdigest()[:16]
        return self._fingerprint

    def check_node(self, v):
        """Raise :class:`NodeIndexError` unless ``v`` is a valid node id."""
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.node_count:
            raise NodeIndexError(v, self.node_count)
        return int(v)

    def degree(self, v):
        """Return ``(in_degree, out_degree)`` of node ``v``."""
        return degree(self, v)

    def to_csr(self, weights=None):
        """Adjacency as a ``scipy.sparse.csr_matrix`` (rows are sources)."""
        data = self.probabilities if weights is None else weights
        return sparse.csr_matrix((data, self.targets, self.out_offsets),
                                 shape=(self.node_count, self.node_count))

    def original_id(self, v):
        return int(self.original_ids[v])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.node_count == other.node_count
                and self.directed == other.directed
                and np.array_equal(self.sources, other.sources)
                and np.array_equal(self.targets, other.targets)
                and np.array_equal(self.probabilities, other.probabilities)
                and np.array_equal(self.costs, other.costs)
                and np.array_equal(self.original_ids, other.original_ids))

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def __repr__(self):
        return "Graph(nodes=%d, arcs=%d, directed=%s, fingerprint=%s)" % (
            self.node_count, self.arc_count, self.directed, self.fingerprint)


def _frozen(array):
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


def build_graph(node_count, sources, targets, directed=True, prob_model=None, cost_model=None,
                original_ids=None):
    """Build a :class:`Graph` from raw arcs, assigning probabilities and costs per the models.

    Undirected inputs are symmetrized, self-loops dropped and duplicate arcs collapsed.

    Returns:
        Graph: The annotated graph
    """
    prob_model = (prob_model or ProbabilityModel()).validate()
    cost_model = (cost_model or CostModel()).validate()
    sources = np.asarray(sources, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    keep = sources != targets
    sources, targets = sources[keep], targets[keep]
    if not directed:
        sources, targets = np.concatenate([sources, targets]), np.concatenate([targets, sources])
    keys = np.unique(sources * node_count + targets)
    sources, targets = keys // node_count, keys % node_count
    if original_ids is None:
        original_ids = np.arange(node_count, dtype=np.int64)
    probabilities = prob_model.assign(targets, node_count)
    costs = cost_model.assign(sources, targets, node_count, directed, original_ids)
    return Graph(node_count, sources, targets, probabilities, costs, original_ids=original_ids,
                 directed=directed, prob_model=prob_model, cost_model=cost_model)


def load_edge_list(path, directed=False, prob_model=None, cost_model=None):
    """Load a SNAP edge list.

    The file holds whitespace-separated ``src dst`` integer pairs; lines starting with
    '#' are comments. Original ids are remapped to dense ids in ascending order.

    Args:
        path: Edge list path
        directed: Treat each line as an arc; otherwise both arcs are created
        prob_model: :class:`ProbabilityModel`, default weighted-cascade
        cost_model: :class:`CostModel`, default degree

    Returns:
        Graph: The loaded graph

    Raises:
        DatasetNotFoundError: If the file does not exist
        GraphFormatError: If a line is malformed
        EmptyGraphError: If no edge survives parsing
    """
    if not os.path.isfile(path):
        raise DatasetNotFoundError(path)

    pairs = []
    self_loops = 0
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith(COMMENT_PREFIX):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise GraphFormatError(path, line_number, "expected 'src dst'")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(path, line_number, "node ids must be integers")
            if u < 0 or v < 0:
                raise GraphFormatError(path, line_number, "node ids must be nonnegative")
            if u == v:
                self_loops += 1
                continue
            pairs.append((u, v))

    if not pairs:
        raise EmptyGraphError(path)
    if self_loops:
        logger.warning("Dropped %d self-loop(s) from %s", self_loops, path)

    raw = np.asarray(pairs, dtype=np.int64)
    original_ids, dense = np.unique(raw, return_inverse=True)
    dense = dense.reshape(raw.shape)
    graph = build_graph(len(original_ids), dense[:, 0], dense[:, 1], directed=directed,
                        prob_model=prob_model, cost_model=cost_model, original_ids=original_ids)
    logger.info("Loaded %s: %d nodes, %d arcs (%s)", path, graph.node_count, graph.arc_count,
                "directed" if directed else "undirected")
    return graph


def load_costs(path, original_ids):
    """Load a ``node_id cost`` file keyed by original ids.

    Returns:
        numpy.ndarray: Costs aligned with ``original_ids``
    """
    if not os.path.isfile(path):
        raise DatasetNotFoundError(path)
    index = {int(node): i for i, node in enumerate(original_ids)}
    costs = np.full(len(index), np.nan)
    unknown = 0
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith(COMMENT_PREFIX):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphFormatError(path, line_number, "expected 'node_id cost'")
            try:
                node, cost = int(parts[0]), float(parts[1])
            except ValueError:
                raise GraphFormatError(path, line_number, "malformed node id or cost")
            if not np.isfinite(cost) or cost < 0:
                raise GraphFormatError(path, line_number, "cost must be finite and >= 0")
            if node not in index:
                unknown += 1
                continue
            costs[index[node]] = cost
    if unknown:
        logger.warning("Ignored %d cost entries for nodes absent from the graph", unknown)
    missing = np.flatnonzero(np.isnan(costs))
    if len(missing):
        raise GraphFormatError(path, reason="no cost for node %d" % original_ids[missing[0]])
    return costs


def degree(g, v):
    """Return ``(in_degree, out_degree)`` of node ``v``.

    Raises:
        NodeIndexError: If ``v`` is out of range
    """
    v = g.check_node(v)
    return (int(g.in_offsets[v + 1] - g.in_offsets[v]), int(g.out_offsets[v + 1] - g.out_offsets[v]))


def induced_subgraph(g, n, rng_seed):
    """Sample an ``n``-node subgraph by breadth-first search from random roots.

    The search follows arcs in both directions; when a component is exhausted a
    new unvisited root is drawn. Probabilities and costs are recomputed under the
    graph's models on the sampled arcs (file costs are carried over).

    Args:
        g: Source graph
        n: Number of nodes to keep, ``1 <= n <= g.node_count``
        rng_seed: Integer seed

    Returns:
        Graph: The sampled subgraph with dense ids in ascending original order

    Raises:
        ConfigError: If ``n`` is outside ``[1, g.node_count]``
    """
    if not 1 <= n <= g.node_count:
        raise ConfigError("Subgraph size must lie in [1, %d], got %r" % (g.node_count, n))

    rng = make_rng(rng_seed, "induced-subgraph")
    neighbors = [sorted(set(out).union(inn)) for out, inn in zip(g.out_adjacency, g.in_adjacency)]
    visited = np.zeros(g.node_count, dtype=bool)
    chosen = []
    while len(chosen) < n:
        candidates = np.flatnonzero(~visited)
        root = int(candidates[rng.integers(len(candidates))])
        visited[root] = True
        queue = deque([root])
        while queue and len(chosen) < n:
            u = queue.popleft()
            chosen.append(u)
            for w in neighbors[u]:
                if not visited[w]:
                    visited[w] = True
                    queue.append(w)

    keep = np.sort(np.asarray(chosen, dtype=np.int64))
    remap = np.full(g.node_count, -1, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    mask = (remap[g.sources] >= 0) & (remap[g.targets] >= 0)
    sources, targets = remap[g.sources[mask]], remap[g.targets[mask]]
    probabilities = g.prob_model.assign(targets, len(keep))
    if g.cost_model.kind == COST_FILE:
        costs = g.costs[keep]
    else:
        costs = g.cost_model.assign(sources, targets, len(keep), g.directed, g.original_ids[keep])
    return Graph(len(keep), sources, targets, probabilities, costs, original_ids=g.original_ids[keep],
                 directed=g.directed, prob_model=g.prob_model, cost_model=g.cost_model)


def graph_info(g):
    """Summary statistics reported by ``seedopt graph info``."""
    components, _ = csgraph.connected_components(g.to_csr(np.ones(g.arc_count)), directed=True,
                                                 connection="weak")
    total = g.in_degrees + g.out_degrees
    return {
        "nodes": g.node_count,
        "arcs": g.arc_count,
        "edges": g.arc_count if g.directed else g.arc_count // 2,
        "directed": g.directed,
        "weak_components": int(components),
        "mean_total_degree": float(total.mean()),
        "max_total_degree": int(total.max()),
        "isolated_nodes": int(np.count_nonzero(total == 0)),
        "total_cost": float(g.costs.sum()),
        "prob_model": g.prob_model.to_dict(),
        "cost_model": g.cost_model.to_dict(),
        "fingerprint": g.fingerprint,
    }
