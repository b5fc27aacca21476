#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""The evolutionary loop shared by EVEA and the NSGA-II baselines.

One generation is: tournament selection, crossover over consecutive pool pairs,
mutation of each child with probability ``p_m``, evaluation of the offspring and
elitist environmental selection over parents plus offspring. The variants differ
only in their operators and initial lengths:

=========  =========================  ======================  ===============
variant    crossover                  mutation                initial length
=========  =========================  ======================  ===============
EVEA       embedding-aligned          add/delete/replace      variable
NSGA2      fixed-length uniform       replace only            fixed ``k``
NSGA2+VC   cut-and-splice             replace only            variable
NSGA2+VM   positional uniform         add/delete/replace      variable
=========  =========================  ======================  ===============

Every random draw comes from a stream derived from ``AlgoConfig.rng_seed``, so a
run replays bit-identically from its config echo at any thread count.
"""
# Import built-in modules
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
import logging
import time

# Import local modules
from seedopt.api.metrics import NormalizationBounds
from seedopt.api.metrics import clipped_count
from seedopt.api.metrics import extract_pareto_front
from seedopt.api.metrics import front_hypervolume
from seedopt.api.objectives import EvalConfig
from seedopt.api.objectives import Evaluator
from seedopt.api.operators import cut_and_splice_crossover
from seedopt.api.operators import embedding_aligned_crossover
from seedopt.api.operators import fixed_length_mutation
from seedopt.api.operators import fixed_length_uniform_crossover
from seedopt.api.operators import positional_uniform_crossover
from seedopt.api.operators import variable_length_mutation
from seedopt.api.selection import assign_rank_and_crowding
from seedopt.api.selection import environmental_selection
from seedopt.api.selection import tournament_selection
from seedopt.constants import ALIGN_GREEDY
from seedopt.constants import ALIGNMENTS
from seedopt.constants import CROSSOVER_GATES
from seedopt.constants import DEFAULT_CROSSOVER_RATE
from seedopt.constants import DEFAULT_INIT_SIZE_RANGE
from seedopt.constants import DEFAULT_MAX_GENERATIONS
from seedopt.constants import DEFAULT_MAX_SEEDS
from seedopt.constants import DEFAULT_MUTATION_RATE
from seedopt.constants import DEFAULT_POPULATION_SIZE
from seedopt.constants import DEFAULT_TOURNAMENT_SIZE
from seedopt.constants import EVAL_MODE_ONCE
from seedopt.constants import GATE_PAIR
from seedopt.constants import VARIANT_EVEA
from seedopt.constants import VARIANT_NSGA2
from seedopt.constants import VARIANT_NSGA2_VC
from seedopt.constants import VARIANT_NSGA2_VM
from seedopt.constants import VARIANTS
from seedopt.exceptions import ConfigError
from seedopt.exceptions import EmbeddingError
from seedopt.exceptions import SeedSetError
from seedopt.internal.rng import derive
from seedopt.internal.rng import make_rng


logger = logging.getLogger(__name__)

CROSSOVER_ALIGNED = "aligned"
CROSSOVER_FIXED = "fixed"
CROSSOVER_POSITIONAL = "positional"
CROSSOVER_SPLICE = "splice"
MUTATION_VARIABLE = "variable"
MUTATION_FIXED = "fixed"

# variant -> (crossover, mutation, fixed initial length)
VARIANT_OPERATORS = {
    VARIANT_EVEA: (CROSSOVER_ALIGNED, MUTATION_VARIABLE, False),
    VARIANT_NSGA2: (CROSSOVER_FIXED, MUTATION_FIXED, True),
    VARIANT_NSGA2_VC: (CROSSOVER_SPLICE, MUTATION_FIXED, False),
    VARIANT_NSGA2_VM: (CROSSOVER_POSITIONAL, MUTATION_VARIABLE, False),
}


@dataclass(eq=False)
class Individual:
    """A seed set with its objectives and NSGA-II bookkeeping."""

    seeds: tuple
    objectives: object = None
    rank: int = None
    crowding: float = None

    def __post_init__(self):
        seeds = tuple(int(v) for v in self.seeds)
        if not seeds:
            raise SeedSetError("Individual needs at least one seed")
        if any(b <= a for a, b in zip(seeds, seeds[1:])):
            raise SeedSetError("Individual seeds must be sorted and duplicate-free: %s" % (seeds,))
        self.seeds = seeds

    @property
    def evaluated(self):
        return self.objectives is not None


@dataclass(frozen=True)
class AlgoConfig:
    population_size: int = DEFAULT_POPULATION_SIZE
    max_generations: int = DEFAULT_MAX_GENERATIONS
    crossover_rate: float = DEFAULT_CROSSOVER_RATE
    mutation_rate: float = DEFAULT_MUTATION_RATE
    tournament_size: int = DEFAULT_TOURNAMENT_SIZE
    init_size_range: tuple = DEFAULT_INIT_SIZE_RANGE
    max_seeds: int = DEFAULT_MAX_SEEDS
    variant: str = VARIANT_EVEA
    rng_seed: int = 0
    crossover_gate: str = GATE_PAIR
    alignment: str = ALIGN_GREEDY
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "init_size_range", tuple(self.init_size_range))

    def validate(self):
        """Check every field; all problems are reported together."""
        errors = []
        n = self.population_size
        if not isinstance(n, int) or n < 2 or n % 2:
            errors.append("population_size must be an even integer >= 2, got %r" % (n,))
        if not isinstance(self.max_generations, int) or self.max_generations < 0:
            errors.append("max_generations must be an integer >= 0, got %r" % (self.max_generations,))
        for name in ("crossover_rate", "mutation_rate"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
                errors.append("%s must lie in [0, 1], got %r" % (name, value))
        if not isinstance(self.tournament_size, int) or self.tournament_size < 1:
            errors.append("tournament_size must be an integer >= 1, got %r" % (self.tournament_size,))
        if not isinstance(self.max_seeds, int) or self.max_seeds < 1:
            errors.append("max_seeds must be an integer >= 1, got %r" % (self.max_seeds,))
        low_high = self.init_size_range
        if len(low_high) != 2 or not all(isinstance(v, int) for v in low_high):
            errors.append("init_size_range must be two integers, got %r" % (low_high,))
        elif not 1 <= low_high[0] <= low_high[1] or (isinstance(self.max_seeds, int)
                                                    and low_high[1] > self.max_seeds):
            errors.append("init_size_range %r must lie within [1, max_seeds=%r]" % (low_high, self.max_seeds))
        if self.variant not in VARIANTS:
            errors.append("variant must be one of %s, got %r" % (VARIANTS, self.variant))
        if self.crossover_gate not in CROSSOVER_GATES:
            errors.append("crossover_gate must be one of %s, got %r" % (CROSSOVER_GATES, self.crossover_gate))
        if self.alignment not in ALIGNMENTS:
            errors.append("alignment must be one of %s, got %r" % (ALIGNMENTS, self.alignment))
        if not isinstance(self.threads, int) or self.threads < 1:
            errors.append("threads must be an integer >= 1, got %r" % (self.threads,))
        if errors:
            raise ConfigError(errors)
        return self

    @property
    def needs_embeddings(self):
        return VARIANT_OPERATORS[self.variant][0] == CROSSOVER_ALIGNED

    @property
    def fixed_length(self):
        """Seed count used by the fixed-length variant: midpoint of the init range."""
        low, high = self.init_size_range
        return (low + high) // 2

    def to_dict(self):
        data = asdict(self)
        data["init_size_range"] = list(self.init_size_range)
        return data

    @classmethod
    def from_dict(cls, data):
        return cls(**data).validate()


@dataclass
class RunResult:
    """Everything one run produces.

    ``fronts[t]`` and ``hv_trace[t]`` describe the population after generation ``t``
    (``t = 0`` is the evaluated initial population); ``hv_trace`` uses the a-priori
    problem bounds. In ``once`` evaluation mode they describe ``archive`` instead, the
    non-dominated set of every individual evaluated so far, so the trace never drops.
    """

    final_population: list
    fronts: list
    hv_trace: list
    timings: list
    config: dict
    provenance: dict
    warnings: list = field(default_factory=list)
    archive: list = field(default_factory=list)

    @property
    def generations(self):
        return len(self.hv_trace) - 1

    @property
    def final_front(self):
        """Archive in ``once`` mode, else the non-dominated individuals of the final population."""
        if self.archive:
            return list(self.archive)
        return extract_pareto_front(self.final_population)

    def to_dict(self, g=None):
        def ids(seeds):
            return [g.original_id(v) for v in seeds] if g is not None else list(seeds)

        return {
            "config": self.config,
            "provenance": self.provenance,
            "warnings": list(self.warnings),
            "generations": self.generations,
            "timings": list(self.timings),
            "hv_trace": list(self.hv_trace),
            "final_front": [
                {"seeds": ids(individual.seeds), "influence": individual.objectives.spread,
                 "cost": individual.objectives.cost, "time": individual.objectives.time}
                for individual in self.final_front
            ],
        }


def initialize_population(g, cfg, rng):
    """Draw ``N`` unevaluated individuals.

    Variable-length variants draw each length uniformly from ``init_size_range``;
    the fixed-length variant uses :attr:`AlgoConfig.fixed_length` for all.

    Raises:
        ConfigError: If the init range exceeds the node count
    """
    low, high = cfg.init_size_range
    if high > g.node_count:
        raise ConfigError("init_size_range upper bound %d exceeds node count %d" % (high, g.node_count))
    fixed = VARIANT_OPERATORS[cfg.variant][2]
    population = []
    for _ in range(cfg.population_size):
        k = cfg.fixed_length if fixed else int(rng.integers(low, high + 1))
        seeds = rng.choice(g.node_count, size=k, replace=False)
        population.append(Individual(tuple(sorted(int(v) for v in seeds))))
    return population


def _crossover(kind, s1, s2, g, emb, cfg, rng):
    if kind == CROSSOVER_ALIGNED:
        return embedding_aligned_crossover(s1, s2, emb, cfg.crossover_rate, rng,
                                           gate=cfg.crossover_gate, alignment=cfg.alignment)
    if kind == CROSSOVER_FIXED:
        return fixed_length_uniform_crossover(s1, s2, cfg.crossover_rate, rng, g.node_count)
    if kind == CROSSOVER_SPLICE:
        return cut_and_splice_crossover(s1, s2, cfg.crossover_rate, rng, max_seeds=cfg.max_seeds)
    return positional_uniform_crossover(s1, s2, cfg.crossover_rate, rng, g.node_count)


def _mutate(kind, seeds, g, cfg, rng):
    if kind == MUTATION_VARIABLE:
        return variable_length_mutation(seeds, g, rng, max_seeds=cfg.max_seeds)
    return fixed_length_mutation(seeds, g, rng)


def make_offspring(pool, g, emb, cfg, rng):
    """Cross consecutive pool pairs, then mutate each child with probability ``p_m``."""
    crossover_kind, mutation_kind, _ = VARIANT_OPERATORS[cfg.variant]
    offspring = []
    for i in range(0, len(pool) - 1, 2):
        children = _crossover(crossover_kind, pool[i].seeds, pool[i + 1].seeds, g, emb, cfg, rng)
        for child in children:
            if rng.random() < cfg.mutation_rate:
                child = _mutate(mutation_kind, child, g, cfg, rng)
            offspring.append(Individual(child))
    return offspring


def _evaluate(evaluator, individuals, threads):
    vectors = evaluator.evaluate_many([individual.seeds for individual in individuals], threads=threads)
    for individual, vector in zip(individuals, vectors):
        individual.objectives = vector


def _check_embeddings(g, emb, cfg):
    warnings = []
    if not cfg.needs_embeddings:
        return warnings
    if emb is None:
        raise ConfigError("variant %s needs node embeddings" % cfg.variant)
    if not emb.covers(g):
        raise EmbeddingError("Embedding table has %d vectors, graph has %d nodes" % (emb.node_count, g.node_count))
    if emb.trained_on and emb.trained_on != g.fingerprint:
        message = "embeddings were trained on graph %s, running on %s" % (emb.trained_on, g.fingerprint)
        logger.warning(message)
        warnings.append(message)
    return warnings


def run(g, emb, cfg, eval_cfg=None, progress=None):
    """Run one optimisation.

    Args:
        g: Graph
        emb: EmbeddingTable, required by EVEA, ignored otherwise
        cfg: :class:`AlgoConfig`
        eval_cfg: :class:`~seedopt.api.objectives.EvalConfig`
        progress: Optional callable ``(generation, hv)`` called after each generation

    Returns:
        RunResult: Fronts, HV trace, timings, config echo and rng provenance

    Raises:
        ConfigError: On inconsistent configuration, e.g. EVEA without embeddings
    """
    cfg = cfg.validate()
    eval_cfg = (eval_cfg or EvalConfig()).validate()
    warnings = _check_embeddings(g, emb, cfg)
    evaluator = Evaluator(g, eval_cfg)
    bounds = NormalizationBounds.from_problem(g, cfg.max_seeds, eval_cfg.delay)

    def eval_seed(generation):
        if eval_cfg.mode == EVAL_MODE_ONCE:
            return derive(cfg.rng_seed, "eval", eval_cfg.base_seed)
        return derive(cfg.rng_seed, "eval", eval_cfg.base_seed, generation)

    fronts, hv_trace, timings = [], [], []
    clipped = [0]
    # once mode: every non-dominated individual seen so far
    archive = []

    def record(population, started, evaluated=()):
        survivors = extract_pareto_front(population)
        if eval_cfg.mode == EVAL_MODE_ONCE:
            archive[:] = extract_pareto_front(archive + survivors + list(evaluated))
            survivors = archive
        front = [individual.objectives for individual in survivors]
        clipped[0] += clipped_count(front, bounds)
        hv = front_hypervolume(front, bounds, warn=False)
        fronts.append(front)
        hv_trace.append(hv)
        timings.append(time.perf_counter() - started)
        logger.debug("Generation %d: front size %d, HV %.6f", len(hv_trace) - 1, len(front), hv)
        if progress is not None:
            progress(len(hv_trace) - 1, hv)

    started = time.perf_counter()
    population = initialize_population(g, cfg, make_rng(cfg.rng_seed, "init"))
    evaluator.reseed(eval_seed(0))
    _evaluate(evaluator, population, cfg.threads)
    assign_rank_and_crowding(population)
    record(population, started)

    for generation in range(1, cfg.max_generations + 1):
        started = time.perf_counter()
        rng = make_rng(cfg.rng_seed, "generation", generation)
        if eval_cfg.mode != EVAL_MODE_ONCE:
            evaluator.reseed(eval_seed(generation))
            _evaluate(evaluator, population, cfg.threads)
            assign_rank_and_crowding(population)
        pool = tournament_selection(population, cfg, rng)
        offspring = make_offspring(pool, g, emb, cfg, rng)
        _evaluate(evaluator, offspring, cfg.threads)
        population = environmental_selection(population + offspring, cfg)
        record(population, started, offspring)

    if clipped[0]:
        message = "clipped %d front point(s) outside the problem bounds" % clipped[0]
        logger.warning(message)
        warnings.append(message)
    logger.debug("Evaluation cache: %d hits, %d misses", evaluator.hits, evaluator.misses)
    logger.info("%s finished %d generations: final HV %.6f, front size %d", cfg.variant, cfg.max_generations,
                hv_trace[-1], len(fronts[-1]))

    provenance = {
        "rng_seed": cfg.rng_seed,
        "graph_fingerprint": g.fingerprint,
        "embeddings_trained_on": getattr(emb, "trained_on", None) if cfg.needs_embeddings else None,
        "streams": {
            "init": "derive(rng_seed, 'init')",
            "generation": "derive(rng_seed, 'generation', t)",
            "eval": "derive(rng_seed, 'eval', base_seed%s)" % ("" if eval_cfg.mode == EVAL_MODE_ONCE else ", t"),
        },
    }
    return RunResult(
        final_population=population,
        fronts=fronts,
        hv_trace=hv_trace,
        timings=timings,
        config={"algorithm": cfg.to_dict(), "eval": eval_cfg.to_dict()},
        provenance=provenance,
        warnings=warnings,
        archive=list(archive),
    )
