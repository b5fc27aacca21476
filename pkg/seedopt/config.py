#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Experiment configuration files.

Configs are TOML (``.toml``) or JSON (``.json``) documents with these tables; every
key is optional unless marked, and unknown keys are rejected::

    [experiment]
    repetitions = 10            # >= 1
    output_dir = "results"
    master_seed = 0
    threads = 1                 # overridden by SEEDOPT_THREADS, then by --threads

    [eval]
    mc_samples = 100
    delay = "unit"              # or "geometric:0.5", or {kind = "geometric", q = 0.5}
    mode = "generation"         # or "once"
    cache_enabled = true
    base_seed = 0

    [walk]
    walks_per_node = 10
    walk_length = 80
    window = 5
    negatives = 5
    dims = 64
    epochs = 3
    learning_rate = 0.025

    [[networks]]
    name = "grqc"               # required, unique
    path = "data/ca-GrQc.txt"   # required; edge list, or a .bin/.json serialized graph
    directed = false
    prob = "wc"                 # or "const:0.1"
    cost = "degree"             # or "unit", "file:costs.txt"
    sample = 500                # optional BFS-induced subgraph size
    sample_seed = 0
    embeddings = "emb.txt"      # optional precomputed table

    [[algorithms]]
    variant = "EVEA"            # required: EVEA, NSGA2, NSGA2+VC, NSGA2+VM; unique
    population_size = 100
    max_generations = 1000
    crossover_rate = 0.9
    mutation_rate = 0.2
    tournament_size = 2
    init_size_range = [1, 30]
    max_seeds = 100
    crossover_gate = "pair"     # or "operator"
    alignment = "greedy"        # or "optimal"

``solve`` reads the same ``[eval]`` and ``[walk]`` tables plus an optional single
``[algorithm]`` table. Per-run ``rng_seed`` values are derived from ``master_seed``
and never read from the file.
"""
# Import built-in modules
from dataclasses import dataclass
from dataclasses import field
from dataclasses import fields
import hashlib
import json
import os
import sys

# Import local modules
from seedopt.api.embedding import WalkConfig
from seedopt.api.evolution import AlgoConfig
from seedopt.api.graph import CostModel
from seedopt.api.graph import ProbabilityModel
from seedopt.api.graph import induced_subgraph
from seedopt.api.graph import load_edge_list
from seedopt.api.graphfile import load_graph
from seedopt.api.objectives import EvalConfig
from seedopt.constants import CONFIG_HASH_LENGTH
from seedopt.constants import DEFAULT_MASTER_SEED
from seedopt.constants import DEFAULT_OUTPUT_DIR
from seedopt.constants import DEFAULT_REPETITIONS
from seedopt.constants import GRAPH_BINARY_EXTENSION
from seedopt.constants import GRAPH_JSON_EXTENSION
from seedopt.constants import THREADS_ENV_VAR
from seedopt.exceptions import ConfigError
from seedopt.internal.filesystem import read_file


if sys.version_info >= (3, 11):
    # Import built-in modules
    import tomllib
else:
    # Import third-party modules
    import tomli as tomllib


def _check_keys(data, allowed, section):
    if not isinstance(data, dict):
        raise ConfigError("[%s] must be a table, got %r" % (section, type(data).__name__))
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(["unknown key %r in [%s]" % (key, section) for key in unknown])


def _field_names(cls):
    return [f.name for f in fields(cls)]


def config_hash(payload):
    """Short stable hash of a JSON-serialisable config payload."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:CONFIG_HASH_LENGTH]


@dataclass(frozen=True)
class NetworkSpec:
    name: str
    path: str
    directed: bool = False
    prob: str = "wc"
    cost: str = "degree"
    sample: int = None
    sample_seed: int = 0
    embeddings: str = None

    def validate(self):
        errors = []
        if not isinstance(self.name, str) or not self.name:
            errors.append("network name must be a nonempty string")
        if not isinstance(self.path, str) or not self.path:
            errors.append("network %r needs a path" % (self.name,))
        for parse, text in ((ProbabilityModel.parse, self.prob), (CostModel.parse, self.cost)):
            try:
                parse(text)
            except ConfigError as e:
                errors.extend(e.errors)
        if self.sample is not None and (not isinstance(self.sample, int) or self.sample < 1):
            errors.append("network %r: sample must be a positive integer, got %r" % (self.name, self.sample))
        if errors:
            raise ConfigError(errors)
        return self

    def to_dict(self):
        return {f: getattr(self, f) for f in _field_names(NetworkSpec)}

    @classmethod
    def from_dict(cls, data):
        _check_keys(data, _field_names(cls), "networks")
        if "name" not in data or "path" not in data:
            raise ConfigError("every [[networks]] entry needs 'name' and 'path'")
        return cls(**data).validate()

    def load(self, base_dir=None):
        """Load the network, resolving relative paths against ``base_dir``."""
        path = self.resolve(self.path, base_dir)
        if path.endswith((GRAPH_BINARY_EXTENSION, GRAPH_JSON_EXTENSION)):
            g = load_graph(path)
        else:
            cost = self.cost
            if cost.startswith("file:"):
                cost = "file:" + self.resolve(cost[len("file:"):], base_dir)
            g = load_edge_list(path, directed=self.directed, prob_model=ProbabilityModel.parse(self.prob),
                               cost_model=CostModel.parse(cost))
        if self.sample is not None and self.sample < g.node_count:
            g = induced_subgraph(g, self.sample, self.sample_seed)
        return g

    @staticmethod
    def resolve(path, base_dir):
        if path is None or base_dir is None or os.path.isabs(path):
            return path
        return os.path.join(base_dir, path)


@dataclass(frozen=True)
class ExperimentSpec:
    networks: list
    algorithms: list
    eval: EvalConfig = field(default_factory=EvalConfig)
    walk: WalkConfig = field(default_factory=WalkConfig)
    repetitions: int = DEFAULT_REPETITIONS
    output_dir: str = DEFAULT_OUTPUT_DIR
    master_seed: int = DEFAULT_MASTER_SEED
    threads: int = 1
    base_dir: str = None

    def validate(self):
        errors = []
        if not isinstance(self.repetitions, int) or self.repetitions < 1:
            errors.append("repetitions must be an integer >= 1, got %r" % (self.repetitions,))
        if not isinstance(self.master_seed, int):
            errors.append("master_seed must be an integer, got %r" % (self.master_seed,))
        if not isinstance(self.threads, int) or self.threads < 1:
            errors.append("threads must be an integer >= 1, got %r" % (self.threads,))
        if not self.networks:
            errors.append("at least one [[networks]] entry is required")
        if not self.algorithms:
            errors.append("at least one [[algorithms]] entry is required")
        names = [network.name for network in self.networks]
        if len(set(names)) != len(names):
            errors.append("network names must be unique: %s" % names)
        variants = [algo.variant for algo in self.algorithms]
        if len(set(variants)) != len(variants):
            errors.append("algorithm variants must be unique: %s" % variants)
        for part in list(self.networks) + list(self.algorithms) + [self.eval, self.walk]:
            try:
                part.validate()
            except ConfigError as e:
                errors.extend(e.errors)
        if errors:
            raise ConfigError(errors)
        return self

    def to_dict(self):
        return {
            "experiment": {
                "repetitions": self.repetitions,
                "output_dir": self.output_dir,
                "master_seed": self.master_seed,
                "threads": self.threads,
            },
            "eval": self.eval.to_dict(),
            "walk": {k: v for k, v in self.walk.to_dict().items() if k != "rng_seed"},
            "networks": [network.to_dict() for network in self.networks],
            "algorithms": [{k: v for k, v in algo.to_dict().items() if k not in ("rng_seed", "threads")}
                           for algo in self.algorithms],
        }

    @classmethod
    def from_dict(cls, data, base_dir=None):
        """Build and validate a spec from a parsed config document.

        Raises:
            ConfigError: Listing every unknown key or invalid value
        """
        _check_keys(data, ("experiment", "eval", "walk", "networks", "algorithms"), "top level")
        experiment = dict(data.get("experiment", {}))
        _check_keys(experiment, ("repetitions", "output_dir", "master_seed", "threads"), "experiment")
        eval_cfg = parse_eval(data.get("eval", {}))
        walk_cfg = parse_walk(data.get("walk", {}))
        networks = [NetworkSpec.from_dict(entry) for entry in data.get("networks", [])]
        algorithms = [parse_algorithm(entry, "algorithms") for entry in data.get("algorithms", [])]
        return cls(networks=networks, algorithms=algorithms, eval=eval_cfg, walk=walk_cfg,
                   base_dir=base_dir, **experiment).validate()


def parse_eval(data):
    _check_keys(data, _field_names(EvalConfig), "eval")
    try:
        return EvalConfig.from_dict(data)
    except TypeError as e:
        raise ConfigError("[eval]: %s" % e)


def parse_walk(data):
    _check_keys(data, [name for name in _field_names(WalkConfig) if name != "rng_seed"], "walk")
    return WalkConfig.from_dict(data)


def parse_algorithm(data, section="algorithm"):
    allowed = [name for name in _field_names(AlgoConfig) if name not in ("rng_seed", "threads")]
    _check_keys(data, allowed, section)
    if section == "algorithms" and "variant" not in data:
        raise ConfigError("every [[algorithms]] entry needs a 'variant'")
    return AlgoConfig.from_dict(data)


def read_document(path):
    """Parse a TOML or JSON config file into a dict.

    Raises:
        ConfigError: If the file is missing, has an unknown extension or fails to parse
    """
    if not os.path.isfile(path):
        raise ConfigError("config file not found", source=path)
    extension = os.path.splitext(path)[1].lower()
    try:
        if extension == ".toml":
            return tomllib.loads(read_file(path))
        if extension == ".json":
            return json.loads(read_file(path))
    except (tomllib.TOMLDecodeError, ValueError) as e:
        raise ConfigError(str(e), source=path)
    raise ConfigError("unsupported config format %r (use .toml or .json)" % extension, source=path)


def load_experiment(path):
    """Load and validate an experiment config; relative paths resolve next to it."""
    document = read_document(path)
    try:
        return ExperimentSpec.from_dict(document, base_dir=os.path.dirname(os.path.abspath(path)))
    except ConfigError as e:
        raise ConfigError(e.errors, source=path)


def load_run_settings(path):
    """Load the ``[algorithm]``, ``[eval]`` and ``[walk]`` tables used by ``solve``.

    Returns:
        tuple: (algorithm dict, EvalConfig, WalkConfig)
    """
    document = read_document(path)
    try:
        _check_keys(document, ("algorithm", "eval", "walk"), "top level")
        algorithm = dict(document.get("algorithm", {}))
        parse_algorithm(algorithm)
        return algorithm, parse_eval(document.get("eval", {})), parse_walk(document.get("walk", {}))
    except ConfigError as e:
        raise ConfigError(e.errors, source=path)


def resolve_threads(cli_value=None, config_value=None):
    """Thread count: ``--threads`` first, then ``SEEDOPT_THREADS``, then the config, then 1."""
    if cli_value is not None:
        value = cli_value
    elif os.getenv(THREADS_ENV_VAR):
        try:
            value = int(os.environ[THREADS_ENV_VAR])
        except ValueError:
            raise ConfigError("%s must be an integer, got %r" % (THREADS_ENV_VAR, os.environ[THREADS_ENV_VAR]))
    else:
        value = config_value or 1
    if value < 1:
        raise ConfigError("thread count must be >= 1, got %r" % value)
    return value


__all__ = [
    "ExperimentSpec",
    "NetworkSpec",
    "config_hash",
    "load_experiment",
    "load_run_settings",
    "read_document",
    "resolve_threads",
]
