#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Test configuration and fixtures."""
# Import built-in modules
import os

# Import third-party modules
import numpy as np
import pytest

# Import local modules
from seedopt.api.embedding import EmbeddingTable
from seedopt.api.embedding import WalkConfig
from seedopt.api.fixtures import toy10_edge_list
from seedopt.api.fixtures import toy10_graph
from seedopt.api.graph import CostModel
from seedopt.api.graph import ProbabilityModel
from seedopt.api.graph import build_graph
from seedopt.constants import COST_UNIT
from seedopt.constants import PROB_CONSTANT
from seedopt.context import get_manager
from seedopt.internal.filesystem import write_file


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow statistical tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def clear_embedding_manager():
    """Keep the process-wide embedding cache from leaking between tests."""
    get_manager().clear()
    yield
    get_manager().clear()


@pytest.fixture
def toy10():
    """The ten-user supermarket network (p = 1, degree costs)."""
    return toy10_graph()


@pytest.fixture
def toy10_file(tmpdir):
    path = os.path.join(str(tmpdir), "toy10.txt")
    write_file(path, toy10_edge_list())
    return path


def make_path_graph(n, p=1.0, directed=True):
    """Path 0 -> 1 -> ... -> n-1 with constant probability and unit costs."""
    return build_graph(n, list(range(n - 1)), list(range(1, n)), directed=directed,
                       prob_model=ProbabilityModel(PROB_CONSTANT, p), cost_model=CostModel(COST_UNIT))


@pytest.fixture
def path_graph():
    return make_path_graph


@pytest.fixture
def edge_list(tmpdir):
    """Write an edge list and return its path."""

    def _write(text, name="edges.txt"):
        path = os.path.join(str(tmpdir), name)
        write_file(path, text)
        return path

    return _write


@pytest.fixture
def random_graph():
    """A connected directed graph: a ring plus random chords, weighted-cascade probabilities."""

    def _build(n=30, chords=60, seed=0):
        rng = np.random.default_rng(seed)
        sources = list(range(n)) + rng.integers(n, size=chords).tolist()
        targets = [(v + 1) % n for v in range(n)] + rng.integers(n, size=chords).tolist()
        return build_graph(n, sources, targets, directed=True)

    return _build


@pytest.fixture
def small_walk():
    return WalkConfig(walks_per_node=4, walk_length=10, window=2, negatives=2, dims=8, epochs=1, rng_seed=3)


@pytest.fixture
def line_embedding():
    """Node v sits at (v, 0): distances equal id differences."""

    def _build(n):
        vectors = np.zeros((n, 2))
        vectors[:, 0] = np.arange(n)
        return EmbeddingTable(vectors)

    return _build
