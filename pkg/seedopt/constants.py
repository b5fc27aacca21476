"""Constants used throughout the seedopt package."""

# Graph models
PROB_WEIGHTED_CASCADE = "weighted-cascade"
PROB_CONSTANT = "constant"
PROB_KINDS = (PROB_WEIGHTED_CASCADE, PROB_CONSTANT)

COST_DEGREE = "degree"
COST_UNIT = "unit"
COST_FILE = "file"
COST_KINDS = (COST_DEGREE, COST_UNIT, COST_FILE)

DELAY_UNIT = "unit"
DELAY_GEOMETRIC = "geometric"
DELAY_KINDS = (DELAY_UNIT, DELAY_GEOMETRIC)

# Edge list parsing
COMMENT_PREFIX = "#"

# Serialized graph format
GRAPH_MAGIC_NUMBER = 0x53454544  # "SEED"
GRAPH_FORMAT_VERSION = 1
GRAPH_HEADER_SIZE = 20
GRAPH_BINARY_EXTENSION = ".bin"
GRAPH_JSON_EXTENSION = ".json"
GRAPH_JSON_FIELDS = ("format", "version", "node_count", "directed", "sources", "targets",
                     "probabilities", "costs", "original_ids", "prob_model", "cost_model")

# Diffusion
DEFAULT_MC_SAMPLES = 100
EXACT_ORACLE_EDGE_LIMIT = 20
EVAL_MODE_GENERATION = "generation"
EVAL_MODE_ONCE = "once"
EVAL_MODES = (EVAL_MODE_GENERATION, EVAL_MODE_ONCE)

# Embedding defaults
DEFAULT_EMBEDDING_DIMS = 64
DEFAULT_WALKS_PER_NODE = 10
DEFAULT_WALK_LENGTH = 80
DEFAULT_WINDOW = 5
DEFAULT_NEGATIVES = 5
DEFAULT_EPOCHS = 3
DEFAULT_LEARNING_RATE = 0.025
MIN_LEARNING_RATE_FRACTION = 1e-4
NEGATIVE_TABLE_POWER = 0.75
EMBEDDING_PRECISION = 17
SGNS_BATCH_SIZE = 64

# Algorithm variants
VARIANT_EVEA = "EVEA"
VARIANT_NSGA2 = "NSGA2"
VARIANT_NSGA2_VC = "NSGA2+VC"
VARIANT_NSGA2_VM = "NSGA2+VM"
VARIANTS = (VARIANT_EVEA, VARIANT_NSGA2, VARIANT_NSGA2_VC, VARIANT_NSGA2_VM)

GATE_PAIR = "pair"
GATE_OPERATOR = "operator"
CROSSOVER_GATES = (GATE_PAIR, GATE_OPERATOR)

ALIGN_GREEDY = "greedy"
ALIGN_OPTIMAL = "optimal"
ALIGNMENTS = (ALIGN_GREEDY, ALIGN_OPTIMAL)

MUTATION_ADD = "add"
MUTATION_DELETE = "delete"
MUTATION_REPLACE = "replace"
MUTATION_STRATEGIES = (MUTATION_ADD, MUTATION_DELETE, MUTATION_REPLACE)

# Evolution defaults
DEFAULT_POPULATION_SIZE = 100
DEFAULT_MAX_GENERATIONS = 1000
DEFAULT_CROSSOVER_RATE = 0.9
DEFAULT_MUTATION_RATE = 0.2
DEFAULT_TOURNAMENT_SIZE = 2
DEFAULT_INIT_SIZE_RANGE = (1, 30)
DEFAULT_MAX_SEEDS = 100

# Metrics
OBJECTIVE_NAMES = ("influence", "cost", "time")
DEFAULT_REFERENCE = 1.1
ZERO_RANGE_VALUE = 0.5
EXACT_WILCOXON_LIMIT = 15
MIN_WILCOXON_SAMPLES = 5
SIGNIFICANCE_LEVEL = 0.05
CONVERGENCE_FRACTION = 0.9
CHECKPOINT_GENERATIONS = (50, 100)

# Experiment defaults
DEFAULT_REPETITIONS = 10
DEFAULT_OUTPUT_DIR = "results"
DEFAULT_MASTER_SEED = 0
THREADS_ENV_VAR = "SEEDOPT_THREADS"

# Output files
FRONT_FILE = "front.csv"
TRACE_FILE = "trace.csv"
RUN_FILE = "run.json"
MANIFEST_FILE = "manifest.json"
REPORT_FILE = "report.json"
SUMMARY_FILE = "summary.csv"
BOUNDS_FILE = "bounds.json"
EMBEDDING_FILE = "embeddings.txt"
FRONT_HEADER = ("generation", "influence", "cost", "time", "hv")
TRACE_HEADER = ("generation", "hv")
CONFIG_HASH_LENGTH = 12

# CLI exit codes
EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_DATA_ERROR = 2
EXIT_RUNTIME_ERROR = 3

# Benchmark networks (download instructions only; nothing is fetched at run time)
SNAP_BASE_URL = "https://snap.stanford.edu/data/"
DATASETS = {
    "facebook": {
        "file": "facebook_combined.txt.gz",
        "nodes": 4039,
        "edges": 88234,
        "directed": False,
        "description": "Social circles from Facebook (anonymized)",
    },
    "grqc": {
        "file": "ca-GrQc.txt.gz",
        "nodes": 5242,
        "edges": 14496,
        "directed": False,
        "description": "Collaboration network of Arxiv General Relativity",
    },
    "gnutella": {
        "file": "p2p-Gnutella08.txt.gz",
        "nodes": 6301,
        "edges": 20777,
        "directed": True,
        "description": "Gnutella peer-to-peer network from August 8 2002",
    },
    "wiki": {
        "file": "wiki-Vote.txt.gz",
        "nodes": 7115,
        "edges": 103689,
        "directed": True,
        "description": "Wikipedia who-votes-on-whom network",
    },
}
