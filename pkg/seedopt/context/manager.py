"""Shared embedding tables for every algorithm run on the same network."""
# Import built-in modules
from collections import OrderedDict
import logging
import os
import threading

# Import local modules
from seedopt.api.embedding import load_embeddings
from seedopt.api.embedding import save_embeddings
from seedopt.api.embedding import train_embeddings
from seedopt.exceptions import EmbeddingError


class EmbeddingManager(object):
    """Trains each (graph, walk config) table once and hands out the same object.

    Tables are keyed by graph fingerprint plus the walk configuration, so two
    networks never share vectors and a changed config never reuses a stale table.
    When a ``path`` is given the table is read from there if present and written
    there after training.
    """

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self._tables = OrderedDict()
        self._lock = threading.Lock()

    @staticmethod
    def key(g, walk_cfg):
        return (g.fingerprint,) + tuple(sorted(walk_cfg.to_dict().items()))

    def get_embeddings(self, g, walk_cfg, path=None):
        """Return the table for ``g``, training or loading it on first use.

        Raises:
            EmbeddingError: If a stored table was trained on a different graph
        """
        key = self.key(g, walk_cfg)
        with self._lock:
            table = self._tables.get(key)
            if table is not None:
                self.logger.debug("Reusing embeddings for graph %s", g.fingerprint)
                return table
            if path and os.path.isfile(path):
                table = load_embeddings(path, g)
                if table.trained_on and table.trained_on != g.fingerprint:
                    raise EmbeddingError("Stored embeddings %s belong to graph %s, not %s"
                                         % (path, table.trained_on, g.fingerprint))
                self.logger.info("Loaded embeddings from %s", path)
            else:
                table = train_embeddings(g, walk_cfg)
                if path:
                    save_embeddings(table, path, g)
                    self.logger.info("Saved embeddings to %s", path)
            self._tables[key] = table
            return table

    def register(self, g, walk_cfg, table):
        """Install an externally produced table for ``g``."""
        if not table.covers(g):
            raise EmbeddingError("Embedding table has %d vectors, graph has %d nodes"
                                 % (table.node_count, g.node_count))
        with self._lock:
            self._tables[self.key(g, walk_cfg)] = table

    def clear(self):
        with self._lock:
            self._tables.clear()

    def __len__(self):
        return len(self._tables)
