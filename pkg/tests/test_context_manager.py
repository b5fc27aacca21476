"""Tests for the shared embedding manager."""
# Import built-in modules
from dataclasses import replace
import os

# Import third-party modules
import numpy as np
import pytest

# Import local modules
from seedopt.api.embedding import EmbeddingTable
from seedopt.api.embedding import save_embeddings
from seedopt.api.embedding import train_embeddings
from seedopt.context import get_manager
from seedopt.context.manager import EmbeddingManager
from seedopt.exceptions import EmbeddingError


@pytest.fixture
def manager():
    """Fixture providing a clean EmbeddingManager instance."""
    return EmbeddingManager()


def test_manager_initialization(manager):
    assert len(manager) == 0


def test_tables_are_reused(manager, random_graph, small_walk):
    g = random_graph(15, 20)
    first = manager.get_embeddings(g, small_walk)
    second = manager.get_embeddings(g, small_walk)
    assert first is second
    assert len(manager) == 1


def test_networks_never_share_tables(manager, random_graph, small_walk):
    first = manager.get_embeddings(random_graph(15, 20, seed=0), small_walk)
    second = manager.get_embeddings(random_graph(15, 20, seed=1), small_walk)
    assert first is not second
    assert len(manager) == 2


def test_changed_walk_config_retrains(manager, random_graph, small_walk):
    g = random_graph(15, 20)
    manager.get_embeddings(g, small_walk)
    manager.get_embeddings(g, replace(small_walk, dims=4))
    assert len(manager) == 2


def test_saves_and_reloads(tmpdir, manager, random_graph, small_walk):
    g = random_graph(15, 20)
    path = os.path.join(str(tmpdir), "emb", "table.txt")
    trained = manager.get_embeddings(g, small_walk, path=path)
    assert os.path.isfile(path)
    reloaded = EmbeddingManager().get_embeddings(g, small_walk, path=path)
    np.testing.assert_allclose(reloaded.vectors, trained.vectors, rtol=0, atol=1e-9)


def test_stored_table_for_another_graph(tmpdir, manager, random_graph, small_walk):
    g = random_graph(15, 20)
    other = random_graph(15, 20, seed=5)
    path = os.path.join(str(tmpdir), "table.txt")
    save_embeddings(train_embeddings(other, small_walk), path, other)
    with pytest.raises(EmbeddingError):
        manager.get_embeddings(g, small_walk, path=path)


def test_register(manager, random_graph, small_walk):
    g = random_graph(15, 20)
    table = EmbeddingTable(np.ones((15, 2)))
    manager.register(g, small_walk, table)
    assert manager.get_embeddings(g, small_walk) is table
    with pytest.raises(EmbeddingError):
        manager.register(g, small_walk, EmbeddingTable(np.ones((3, 2))))


def test_clear(manager, random_graph, small_walk):
    manager.get_embeddings(random_graph(15, 20), small_walk)
    manager.clear()
    assert len(manager) == 0


def test_global_manager_is_shared():
    assert get_manager() is get_manager()
