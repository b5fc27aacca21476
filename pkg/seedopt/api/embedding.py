#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Node embeddings from uniform random walks and skip-gram with negative sampling.

Walks follow out-arcs uniformly (``p = q = 1``) and stop early at sinks. Training
is single-threaded minibatch SGD so identical inputs give identical tables.
Tables are exchanged in the word2vec text format::

    <node_count> <dims>
    <node_id> <v1> ... <v_dims>

where ``node_id`` is the graph's original id.
"""
# Import built-in modules
from dataclasses import asdict
from dataclasses import dataclass
import hashlib
import logging
import os

# Import third-party modules
import numpy as np

# Import local modules
from seedopt.constants import DEFAULT_EMBEDDING_DIMS
from seedopt.constants import DEFAULT_EPOCHS
from seedopt.constants import DEFAULT_LEARNING_RATE
from seedopt.constants import DEFAULT_NEGATIVES
from seedopt.constants import DEFAULT_WALK_LENGTH
from seedopt.constants import DEFAULT_WALKS_PER_NODE
from seedopt.constants import DEFAULT_WINDOW
from seedopt.constants import EMBEDDING_PRECISION
from seedopt.constants import MIN_LEARNING_RATE_FRACTION
from seedopt.constants import NEGATIVE_TABLE_POWER
from seedopt.constants import SGNS_BATCH_SIZE
from seedopt.exceptions import ConfigError
from seedopt.exceptions import DatasetNotFoundError
from seedopt.exceptions import EmbeddingError
from seedopt.exceptions import GraphFormatError
from seedopt.exceptions import NodeIndexError
from seedopt.internal.filesystem import write_file
from seedopt.internal.rng import make_rng


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WalkConfig:
    walks_per_node: int = DEFAULT_WALKS_PER_NODE
    walk_length: int = DEFAULT_WALK_LENGTH
    window: int = DEFAULT_WINDOW
    negatives: int = DEFAULT_NEGATIVES
    dims: int = DEFAULT_EMBEDDING_DIMS
    epochs: int = DEFAULT_EPOCHS
    learning_rate: float = DEFAULT_LEARNING_RATE
    rng_seed: int = 0

    def validate(self):
        errors = []
        for name in ("walks_per_node", "walk_length", "window", "negatives", "dims"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                errors.append("%s must be an integer >= 1, got %r" % (name, value))
        if not isinstance(self.epochs, int) or self.epochs < 0:
            errors.append("epochs must be an integer >= 0, got %r" % (self.epochs,))
        if isinstance(self.window, int) and isinstance(self.walk_length, int) and self.window >= self.walk_length:
            errors.append("window (%r) must be smaller than walk_length (%r)" % (self.window, self.walk_length))
        if not self.learning_rate > 0:
            errors.append("learning_rate must be positive, got %r" % (self.learning_rate,))
        if errors:
            raise ConfigError(errors)
        return self

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data).validate()


class EmbeddingTable(object):
    """Per-node vectors of uniform dimension, bound to a graph fingerprint."""

    def __init__(self, vectors, trained_on=None):
        vectors = np.array(vectors, dtype=np.float64, ndmin=2)
        if vectors.shape[0] < 1 or vectors.shape[1] < 1:
            raise EmbeddingError("Embedding table must hold at least one vector of dimension >= 1")
        if not np.all(np.isfinite(vectors)):
            raise EmbeddingError("Embedding table contains non-finite entries")
        vectors.setflags(write=False)
        self.vectors = vectors
        self.trained_on = trained_on

    @property
    def dims(self):
        return self.vectors.shape[1]

    @property
    def node_count(self):
        return self.vectors.shape[0]

    def check_node(self, v):
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.node_count:
            raise NodeIndexError(v, self.node_count)
        return int(v)

    def covers(self, g):
        return self.node_count == g.node_count

    def __eq__(self, other):
        if not isinstance(other, EmbeddingTable):
            return NotImplemented
        return self.trained_on == other.trained_on and np.array_equal(self.vectors, other.vectors)

    __hash__ = None

    def __repr__(self):
        return "EmbeddingTable(nodes=%d, dims=%d, trained_on=%s)" % (self.node_count, self.dims, self.trained_on)


def generate_walks(g, cfg):
    """Uniform random walks from every node.

    Walk ``j`` from node ``v`` draws from its own stream ``derive(rng_seed, v, j)``, so
    walks can be generated in any order or in parallel.

    Returns:
        list: Walks as lists of node ids, ordered by (start node, walk index)
    """
    cfg.validate()
    adjacency = g.out_adjacency
    walks = []
    for start in range(g.node_count):
        for j in range(cfg.walks_per_node):
            rng = make_rng(cfg.rng_seed, "walk", start, j)
            walk = [start]
            steps = rng.random(cfg.walk_length - 1)
            for step in steps:
                neighbors = adjacency[walk[-1]]
                if not neighbors:
                    break
                walk.append(neighbors[int(step * len(neighbors))])
            walks.append(walk)
    return walks


def corpus_hash(walks):
    digest = hashlib.sha256()
    for walk in walks:
        digest.update(np.asarray(walk, dtype="<i8").tobytes())
        digest.update(b"|")
    return digest.hexdigest()


def _negative_table(counts):
    weights = counts.astype(np.float64) ** NEGATIVE_TABLE_POWER
    return np.cumsum(weights) / weights.sum()


def train_sgns(corpus, cfg, node_count=None, trained_on=None):
    """Train skip-gram with negative sampling and return the input vectors.

    Args:
        corpus: Walks as sequences of node ids
        cfg: :class:`WalkConfig`
        node_count: Number of nodes; defaults to ``max id + 1`` in the corpus
        trained_on: Graph fingerprint stored on the table

    Raises:
        EmbeddingError: If the corpus is empty or a node never occurs in it
    """
    cfg.validate()
    walks = [np.asarray(walk, dtype=np.int64) for walk in corpus if len(walk)]
    if not walks:
        raise EmbeddingError("Cannot train on an empty corpus")
    flat = np.concatenate(walks)
    if node_count is None:
        node_count = int(flat.max()) + 1
    counts = np.bincount(flat, minlength=node_count)
    absent = np.flatnonzero(counts == 0)
    if len(absent):
        raise EmbeddingError("Node absent from walk corpus", node=int(absent[0]))

    rng = make_rng(cfg.rng_seed, "sgns")
    dims = cfg.dims
    w_in = (rng.random((node_count, dims)) - 0.5) / dims
    w_out = np.zeros((node_count, dims))
    cumulative = _negative_table(counts)

    pairs = [np.empty((0, 2), dtype=np.int64)]
    for walk in walks:
        for offset in range(1, min(cfg.window, len(walk) - 1) + 1):
            pairs.append(np.column_stack((walk[:-offset], walk[offset:])))
            pairs.append(np.column_stack((walk[offset:], walk[:-offset])))
    pairs = np.concatenate(pairs)
    total_steps = max(1, cfg.epochs * len(pairs))
    min_lr = cfg.learning_rate * MIN_LEARNING_RATE_FRACTION

    labels = np.zeros(cfg.negatives + 1)
    labels[0] = 1.0
    step = 0
    for _epoch in range(cfg.epochs):
        order = rng.permutation(len(pairs))
        negatives = np.searchsorted(cumulative, rng.random((len(pairs), cfg.negatives)), side="right")
        negatives = np.minimum(negatives, node_count - 1)
        for start in range(0, len(order), SGNS_BATCH_SIZE):
            batch = order[start:start + SGNS_BATCH_SIZE]
            lr = max(min_lr, cfg.learning_rate * (1.0 - step / total_steps))
            step += len(batch)
            centers = pairs[batch, 0]
            targets = np.concatenate((pairs[batch, 1:2], negatives[batch]), axis=1)
            v = w_in[centers]
            u = w_out[targets]
            scores = _sigmoid(np.einsum("bkd,bd->bk", u, v))
            gradient = (labels[None, :] - scores) * lr
            np.add.at(w_in, centers, np.einsum("bk,bkd->bd", gradient, u))
            np.add.at(w_out, targets.ravel(), (gradient[:, :, None] * v[:, None, :]).reshape(-1, dims))

    logger.debug("Trained %d-d embeddings for %d nodes over %d pairs", dims, node_count, len(pairs))
    return EmbeddingTable(w_in, trained_on=trained_on)


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * np.clip(x, -30.0, 30.0)))


def train_embeddings(g, cfg=None):
    """Walk and train in one go; the table is bound to ``g.fingerprint``."""
    cfg = (cfg or WalkConfig()).validate()
    walks = generate_walks(g, cfg)
    logger.info("Training embeddings: %d walks, dims=%d, epochs=%d", len(walks), cfg.dims, cfg.epochs)
    return train_sgns(walks, cfg, node_count=g.node_count, trained_on=g.fingerprint)


def euclidean_distance(t, u, v):
    """L2 distance between the vectors of ``u`` and ``v``."""
    u, v = t.check_node(u), t.check_node(v)
    return float(np.linalg.norm(t.vectors[u] - t.vectors[v]))


def save_embeddings(t, path, g=None):
    """Write a table in the word2vec text format.

    Node ids written are ``g.original_ids`` when a graph is given, dense ids otherwise.
    The graph fingerprint goes into a leading comment line.
    """
    ids = g.original_ids if g is not None else np.arange(t.node_count)
    lines = []
    if t.trained_on:
        lines.append("# trained_on=%s" % t.trained_on)
    lines.append("%d %d" % (t.node_count, t.dims))
    fmt = "%%.%dg" % EMBEDDING_PRECISION
    for node, vector in zip(ids, t.vectors):
        lines.append("%d %s" % (node, " ".join(fmt % x for x in vector)))
    write_file(path, "\n".join(lines) + "\n")


def load_embeddings(path, g=None):
    """Read a word2vec text table.

    When ``g`` is given, ids are mapped through ``g.original_ids`` and coverage of
    every node is required; otherwise ids must be dense ``0..n-1``.

    Raises:
        GraphFormatError: On a malformed header or line
        EmbeddingError: On dimension mismatch or missing nodes
    """
    if not os.path.isfile(path):
        raise DatasetNotFoundError(path)
    trained_on = None
    header = None
    rows = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                if key.strip() == "trained_on":
                    trained_on = value.strip()
                continue
            parts = line.split()
            if header is None:
                if len(parts) != 2:
                    raise GraphFormatError(path, line_number, "expected header 'n dims'")
                try:
                    header = (int(parts[0]), int(parts[1]))
                except ValueError:
                    raise GraphFormatError(path, line_number, "malformed header")
                continue
            if len(parts) != header[1] + 1:
                raise GraphFormatError(path, line_number, "expected %d values, found %d"
                                       % (header[1], len(parts) - 1))
            try:
                rows[int(parts[0])] = [float(x) for x in parts[1:]]
            except ValueError:
                raise GraphFormatError(path, line_number, "malformed vector")
    if header is None:
        raise GraphFormatError(path, reason="missing header")
    if len(rows) != header[0]:
        raise EmbeddingError("Header declares %d vectors, file holds %d" % (header[0], len(rows)))

    ids = list(g.original_ids) if g is not None else list(range(header[0]))
    vectors = np.empty((len(ids), header[1]))
    for i, node in enumerate(ids):
        if int(node) not in rows:
            raise EmbeddingError("Missing embedding vector", node=int(node))
        vectors[i] = rows[int(node)]
    table = EmbeddingTable(vectors, trained_on=trained_on)
    if g is not None and trained_on and trained_on != g.fingerprint:
        logger.warning("Embeddings in %s were trained on graph %s, not %s", path, trained_on, g.fingerprint)
    return table
