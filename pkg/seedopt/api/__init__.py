"""Graph, diffusion, embedding, evolution and metric building blocks for seedopt."""

# fmt: off
# isort: skip_file
# ruff: noqa: I001
from seedopt.api.graph import Graph, load_edge_list, induced_subgraph
from seedopt.api.diffusion import DelayDistribution, simulate_cascade, estimate_objectives_mc, exact_expectation
from seedopt.api.objectives import EvalConfig, Evaluator, ObjectiveVector, dominates
from seedopt.api.embedding import EmbeddingTable, WalkConfig, train_embeddings
from seedopt.api.operators import align_pairs, embedding_aligned_crossover, variable_length_mutation
from seedopt.api.selection import crowding_distance, environmental_selection, fast_nondominated_sort
from seedopt.api.evolution import AlgoConfig, Individual, RunResult, run
from seedopt.api.metrics import NormalizationBounds, extract_pareto_front, hypervolume_3d, normalize
from seedopt.api.stats import wilcoxon_signed_rank


__all__ = [
    "AlgoConfig",
    "DelayDistribution",
    "EmbeddingTable",
    "EvalConfig",
    "Evaluator",
    "Graph",
    "Individual",
    "NormalizationBounds",
    "ObjectiveVector",
    "RunResult",
    "WalkConfig",
    "align_pairs",
    "crowding_distance",
    "dominates",
    "embedding_aligned_crossover",
    "environmental_selection",
    "estimate_objectives_mc",
    "exact_expectation",
    "extract_pareto_front",
    "fast_nondominated_sort",
    "hypervolume_3d",
    "induced_subgraph",
    "load_edge_list",
    "normalize",
    "run",
    "simulate_cascade",
    "train_embeddings",
    "variable_length_mutation",
    "wilcoxon_signed_rank",
]
