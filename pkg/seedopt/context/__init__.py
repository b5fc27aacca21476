"""Process-wide state shared between experiment cells."""
# Import local modules
from seedopt.context.manager import EmbeddingManager


_global_manager = None


def get_manager():
    """Get the global embedding manager instance."""
    global _global_manager
    if _global_manager is None:
        _global_manager = EmbeddingManager()
    return _global_manager


__all__ = ["EmbeddingManager", "get_manager"]
