#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Variation operators on seed sets.

Seed sets enter and leave every operator as sorted tuples of distinct node ids.
The variable-length pair (aligned crossover and add/delete/replace mutation) drives
EVEA; the fixed-length pair (uniform crossover and replace-only mutation) drives the
plain NSGA-II baseline. Cut-and-splice and positional uniform crossover serve the
variable-length baselines without touching embeddings.
"""
# Import built-in modules
from dataclasses import dataclass
from dataclasses import field
import logging

# Import third-party modules
import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

# Import local modules
from seedopt.constants import ALIGN_GREEDY
from seedopt.constants import ALIGN_OPTIMAL
from seedopt.constants import ALIGNMENTS
from seedopt.constants import CROSSOVER_GATES
from seedopt.constants import GATE_OPERATOR
from seedopt.constants import MUTATION_ADD
from seedopt.constants import MUTATION_DELETE
from seedopt.constants import MUTATION_REPLACE
from seedopt.exceptions import ConfigError
from seedopt.exceptions import EmbeddingError
from seedopt.exceptions import SeedSetError


logger = logging.getLogger(__name__)


@dataclass
class AlignmentPairing:
    """Result of matching two seed sets in embedding space.

    ``pairs`` holds ``(node from s1, node from s2, distance)`` in the order the pairs
    were matched.
    """

    pairs: list = field(default_factory=list)
    unmatched_1: list = field(default_factory=list)
    unmatched_2: list = field(default_factory=list)


def _as_seed_list(seeds):
    nodes = sorted({int(v) for v in seeds})
    if not nodes:
        raise SeedSetError("Seed set must contain at least one node")
    return nodes


def _vectors(emb, nodes):
    for v in nodes:
        if not 0 <= v < emb.node_count:
            raise EmbeddingError("Missing embedding vector", node=v)
    return emb.vectors[nodes]


def align_pairs(s1, s2, emb, method=ALIGN_GREEDY):
    """Pair the nodes of two seed sets by embedding distance.

    The greedy rule repeatedly takes the unmatched cross pair with the smallest
    Euclidean distance, ties going to the lexicographically smaller ``(id1, id2)``,
    until the shorter set runs out. ``method="optimal"`` minimises the total distance
    instead.

    Args:
        s1: First seed set
        s2: Second seed set
        emb: :class:`~seedopt.api.embedding.EmbeddingTable`
        method: ``greedy`` or ``optimal``

    Returns:
        AlignmentPairing: Matched pairs and the leftover nodes of each side

    Raises:
        EmbeddingError: If a node has no vector
    """
    if method not in ALIGNMENTS:
        raise ConfigError("alignment must be one of %s, got %r" % (ALIGNMENTS, method))
    a = _as_seed_list(s1)
    b = _as_seed_list(s2)
    distances = cdist(_vectors(emb, a), _vectors(emb, b))

    matched = []
    if method == ALIGN_OPTIMAL:
        rows, cols = linear_sum_assignment(distances)
        matched = list(zip(rows.tolist(), cols.tolist()))
    else:
        rows, cols = np.indices(distances.shape)
        order = np.lexsort((cols.ravel(), rows.ravel(), distances.ravel()))
        used_a, used_b = set(), set()
        limit = min(len(a), len(b))
        for flat in order:
            i, j = divmod(int(flat), len(b))
            if i in used_a or j in used_b:
                continue
            used_a.add(i)
            used_b.add(j)
            matched.append((i, j))
            if len(matched) == limit:
                break

    paired_a = {i for i, _ in matched}
    paired_b = {j for _, j in matched}
    return AlignmentPairing(
        pairs=[(a[i], b[j], float(distances[i, j])) for i, j in matched],
        unmatched_1=[v for i, v in enumerate(a) if i not in paired_a],
        unmatched_2=[v for j, v in enumerate(b) if j not in paired_b],
    )


def embedding_aligned_crossover(s1, s2, emb, p_c, rng, gate="pair", alignment=ALIGN_GREEDY):
    """Exchange aligned nodes between two parents.

    Each aligned pair ``(u, v)`` is swapped with probability ``p_c``: the first child
    loses ``u`` and gains ``v``, the second loses ``v`` and gains ``u``. Unmatched
    nodes stay on their side. Swapping in a node the child already holds shrinks it
    by one. A child always keeps the node it just gained, so neither child can end
    up empty.

    With ``gate="operator"`` a single draw against ``p_c`` decides whether every
    pair is swapped or none is.

    Returns:
        tuple: Two sorted seed tuples
    """
    if gate not in CROSSOVER_GATES:
        raise ConfigError("crossover gate must be one of %s, got %r" % (CROSSOVER_GATES, gate))
    pairing = align_pairs(s1, s2, emb, method=alignment)
    child_1 = set(_as_seed_list(s1))
    child_2 = set(_as_seed_list(s2))

    if gate == GATE_OPERATOR:
        swaps = [rng.random() < p_c] * len(pairing.pairs)
    else:
        swaps = (rng.random(len(pairing.pairs)) < p_c).tolist()

    for (u, v, _distance), swap in zip(pairing.pairs, swaps):
        if not swap or u == v:
            continue
        child_1.discard(u)
        child_1.add(v)
        child_2.discard(v)
        child_2.add(u)
    return tuple(sorted(child_1)), tuple(sorted(child_2))


def _random_outside(members, node_count, rng):
    """Uniform node from ``V`` minus ``members``; None when every node is taken."""
    if len(members) >= node_count:
        return None
    if 2 * len(members) <= node_count:
        while True:
            v = int(rng.integers(node_count))
            if v not in members:
                return v
    free = np.setdiff1d(np.arange(node_count), np.fromiter(members, dtype=np.int64))
    return int(free[rng.integers(len(free))])


def feasible_strategies(size, node_count, max_seeds=None):
    """Mutation strategies that keep ``1 <= |S| <= min(node_count, max_seeds)``."""
    limit = node_count if max_seeds is None else min(node_count, max_seeds)
    strategies = []
    if size < limit:
        strategies.append(MUTATION_ADD)
    if size > 1:
        strategies.append(MUTATION_DELETE)
    if size < node_count:
        strategies.append(MUTATION_REPLACE)
    return strategies


def choose_strategy(size, node_count, rng, max_seeds=None):
    """Uniform pick among the feasible strategies, or None when nothing applies."""
    strategies = feasible_strategies(size, node_count, max_seeds)
    if not strategies:
        return None
    return strategies[int(rng.integers(len(strategies)))]


def variable_length_mutation(s, g, rng, max_seeds=None):
    """Add, delete or replace one seed, chosen uniformly among feasible strategies.

    Args:
        s: Seed set
        g: Graph the seeds belong to
        rng: ``numpy.random.Generator``
        max_seeds: Optional cap on the seed set size

    Returns:
        tuple: Mutated sorted seed tuple
    """
    members = set(_as_seed_list(s))
    strategy = choose_strategy(len(members), g.node_count, rng, max_seeds)
    if strategy == MUTATION_ADD:
        members.add(_random_outside(members, g.node_count, rng))
    elif strategy == MUTATION_DELETE:
        ordered = sorted(members)
        members.remove(ordered[int(rng.integers(len(ordered)))])
    elif strategy == MUTATION_REPLACE:
        ordered = sorted(members)
        victim = ordered[int(rng.integers(len(ordered)))]
        incoming = _random_outside(members, g.node_count, rng)
        members.remove(victim)
        members.add(incoming)
    return tuple(sorted(members))


def fixed_length_uniform_crossover(s1, s2, p_c, rng, node_count):
    """Position-wise uniform crossover on the sorted parents.

    Each slot swaps with probability ``p_c``. A child left with a duplicate is
    repaired by drawing uniform unused nodes until it has ``k`` members again.

    Raises:
        SeedSetError: If the parents differ in length
    """
    a = _as_seed_list(s1)
    b = _as_seed_list(s2)
    if len(a) != len(b):
        raise SeedSetError("Fixed-length crossover needs equal lengths, got %d and %d" % (len(a), len(b)))
    return positional_uniform_crossover(a, b, p_c, rng, node_count)


def positional_uniform_crossover(s1, s2, p_c, rng, node_count):
    """Uniform crossover over the shared slots of two sorted parents of any length.

    Slots past the shorter parent stay with the longer one; each child keeps its
    parent's length after duplicate repair.
    """
    a = _as_seed_list(s1)
    b = _as_seed_list(s2)
    shared = min(len(a), len(b))
    swap = rng.random(shared) < p_c
    child_1 = [y if flip else x for x, y, flip in zip(a, b, swap)] + a[shared:]
    child_2 = [x if flip else y for x, y, flip in zip(a, b, swap)] + b[shared:]
    return _repair(child_1, len(a), node_count, rng), _repair(child_2, len(b), node_count, rng)


def cut_and_splice_crossover(s1, s2, p_c, rng, max_seeds=None):
    """Variable-length one-point crossover that ignores embeddings.

    With probability ``p_c`` both parents are shuffled, each is cut at its own
    uniform point ``1..len`` and the tails are exchanged, so child lengths may
    differ from both parents. Repeated nodes collapse. A child above
    ``max_seeds`` loses uniform members until it fits.

    Returns:
        tuple: Two sorted seed tuples, each a non-empty subset of ``s1 | s2``
    """
    a = _as_seed_list(s1)
    b = _as_seed_list(s2)
    if rng.random() >= p_c:
        return tuple(a), tuple(b)
    a = [a[i] for i in rng.permutation(len(a))]
    b = [b[i] for i in rng.permutation(len(b))]
    cut_a = int(rng.integers(1, len(a) + 1))
    cut_b = int(rng.integers(1, len(b) + 1))
    children = []
    for head, tail in ((a[:cut_a], b[cut_b:]), (b[:cut_b], a[cut_a:])):
        members = sorted(set(head + tail))
        if max_seeds is not None and len(members) > max_seeds:
            keep = rng.choice(len(members), size=max_seeds, replace=False)
            members = sorted(members[i] for i in keep)
        children.append(tuple(members))
    return children[0], children[1]


def _repair(nodes, k, node_count, rng):
    members = set(nodes)
    while len(members) < k:
        members.add(_random_outside(members, node_count, rng))
    return tuple(sorted(members))


def fixed_length_mutation(s, g, rng):
    """Replace one uniform member with a uniform unused node; length is preserved."""
    members = set(_as_seed_list(s))
    incoming = _random_outside(members, g.node_count, rng)
    if incoming is None:
        return tuple(sorted(members))
    ordered = sorted(members)
    members.remove(ordered[int(rng.integers(len(ordered)))])
    members.add(incoming)
    return tuple(sorted(members))
