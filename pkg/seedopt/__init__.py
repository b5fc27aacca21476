"""seedopt - Tri-objective seed selection with embedding-guided evolution."""
from .__version__ import __version__
from .api.evolution import AlgoConfig
from .api.evolution import run
from .api.objectives import EvalConfig
from .core import run_experiment


__all__ = [
    "AlgoConfig",
    "EvalConfig",
    "__version__",
    "run",
    "run_experiment",
]
