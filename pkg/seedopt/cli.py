"""Command-line interface for seedopt."""
# Import built-in modules
import argparse
from dataclasses import replace
import json
import logging
import os
import sys

# Import local modules
from seedopt.api.embedding import load_embeddings
from seedopt.api.embedding import save_embeddings
from seedopt.api.embedding import train_embeddings
from seedopt.api.embedding import WalkConfig
from seedopt.api.evolution import AlgoConfig
from seedopt.api.fixtures import toy10_edge_list
from seedopt.api.graph import CostModel
from seedopt.api.graph import ProbabilityModel
from seedopt.api.graph import graph_info
from seedopt.api.graph import induced_subgraph
from seedopt.api.graph import load_edge_list
from seedopt.api.graphfile import load_graph
from seedopt.api.graphfile import save_graph
from seedopt.api.metrics import NormalizationBounds
from seedopt.api.metrics import extract_pareto_front
from seedopt.api.metrics import front_hypervolume
from seedopt.api.metrics import objective_correlations
from seedopt.api.metrics import read_front_csv
from seedopt.api.metrics import select_feasible
from seedopt.api.objectives import EvalConfig
from seedopt.config import load_experiment
from seedopt.config import load_run_settings
from seedopt.config import resolve_threads
from seedopt.constants import DATASETS
from seedopt.constants import DEFAULT_REFERENCE
from seedopt.constants import EMBEDDING_FILE
from seedopt.constants import EXIT_DATA_ERROR
from seedopt.constants import EXIT_RUNTIME_ERROR
from seedopt.constants import EXIT_SUCCESS
from seedopt.constants import EXIT_USAGE
from seedopt.constants import GRAPH_BINARY_EXTENSION
from seedopt.constants import GRAPH_JSON_EXTENSION
from seedopt.constants import OBJECTIVE_NAMES
from seedopt.constants import SNAP_BASE_URL
from seedopt.constants import VARIANT_EVEA
from seedopt.constants import VARIANTS
from seedopt.constants import ZERO_RANGE_VALUE
from seedopt.core import Experiment
from seedopt.core import load_manifest
from seedopt.core import solve
from seedopt.exceptions import ConfigError
from seedopt.exceptions import DatasetNotFoundError
from seedopt.exceptions import EmbeddingError
from seedopt.exceptions import EmptyGraphError
from seedopt.exceptions import GraphFormatError
from seedopt.exceptions import HypervolumeError
from seedopt.exceptions import NodeIndexError
from seedopt.exceptions import SeedSetError
from seedopt.internal.filesystem import read_json
from seedopt.internal.filesystem import write_file
from seedopt.internal.logging import get_logger
from seedopt.internal.logging import setup_logging


DATA_ERRORS = (GraphFormatError, EmptyGraphError, EmbeddingError, DatasetNotFoundError, NodeIndexError,
               SeedSetError, HypervolumeError)


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the seedopt usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _add_graph_arguments(parser, option=False):
    """Graph input and the edge-list loading flags; ``option`` makes the graph a ``--graph`` flag."""
    if option:
        parser.add_argument("--graph", help="SNAP edge list, or a serialized graph (.bin/.json)")
    else:
        parser.add_argument("graph", help="SNAP edge list, or a serialized graph (.bin/.json)")
    parser.add_argument("--directed", action="store_true", help="Treat edge list lines as directed arcs")
    parser.add_argument("--prob", default="wc", help="Propagation probabilities: wc or const:P (default: wc)")
    parser.add_argument("--cost", default="degree", help="Seed costs: degree, unit or file:PATH (default: degree)")


def create_parser():
    """Create command line argument parser."""
    examples = """
examples:
    # Inspect a network
    seedopt graph info ca-GrQc.txt

    # Cut a 500-node BFS subgraph and store it
    seedopt graph sample ca-GrQc.txt -n 500 --seed 1 --output grqc500.bin

    # Train node embeddings
    seedopt embed train grqc500.bin --output grqc500.emb

    # One EVEA run, then pick the best seeds under a budget and a deadline
    seedopt solve grqc500.bin --embeddings grqc500.emb --seed 7 --output runs/evea --budget 20 --deadline 3

    # A full benchmark grid, and its replay
    seedopt bench --config bench.toml --threads 4
    seedopt bench --replay results/manifest.json --output replay

    # Hypervolume of a stored front
    seedopt hv runs/evea/front.csv --bounds results/grqc/bounds.json

    # The ten-user supermarket example network
    seedopt fixture figure1 --output toy10.txt
    """

    parser = ArgumentParser(
        prog="seedopt",
        description="seedopt - tri-objective influence maximization",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=examples,
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log debug messages")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Log warnings and errors only")
    subparsers = parser.add_subparsers(dest="command", help="Available commands", parser_class=ArgumentParser)

    # graph
    graph_parser = subparsers.add_parser("graph", help="Inspect or sample networks")
    graph_commands = graph_parser.add_subparsers(dest="graph_command", parser_class=ArgumentParser)
    info_parser = graph_commands.add_parser("info", help="Print network statistics as JSON")
    _add_graph_arguments(info_parser)
    sample_parser = graph_commands.add_parser("sample", help="Extract a BFS-induced subgraph")
    _add_graph_arguments(sample_parser)
    sample_parser.add_argument("-n", "--nodes", type=int, required=True, help="Number of nodes to keep")
    sample_parser.add_argument("--seed", type=int, default=0, help="Sampling seed (default: 0)")
    sample_parser.add_argument("-o", "--output", required=True, help="Output graph (.bin or .json)")

    # embed
    embed_parser = subparsers.add_parser("embed", help="Train or inspect node embeddings")
    embed_commands = embed_parser.add_subparsers(dest="embed_command", parser_class=ArgumentParser)
    train_parser = embed_commands.add_parser("train", help="Train embeddings from random walks")
    _add_graph_arguments(train_parser)
    train_parser.add_argument("-o", "--output", required=True, help="Output embedding file")
    train_parser.add_argument("-c", "--config", help="Config file with a [walk] table")
    train_parser.add_argument("--seed", type=int, default=0, help="Walk and training seed (default: 0)")
    inspect_parser = embed_commands.add_parser("inspect", help="Summarise an embedding file")
    inspect_parser.add_argument("embeddings", help="Embedding file")
    _add_graph_arguments(inspect_parser, option=True)

    # solve
    solve_parser = subparsers.add_parser("solve", help="Run one optimisation")
    _add_graph_arguments(solve_parser)
    solve_parser.add_argument("-e", "--embeddings", help="Precomputed embedding file")
    solve_parser.add_argument("-a", "--algorithm", choices=VARIANTS, help="Variant (default: EVEA)")
    solve_parser.add_argument("-c", "--config", help="Config file with [algorithm], [eval] and [walk] tables")
    solve_parser.add_argument("--seed", type=int, default=0, help="Run seed (default: 0)")
    solve_parser.add_argument("--threads", type=int, help="Evaluation threads")
    solve_parser.add_argument("--generations", type=int, help="Override max_generations")
    solve_parser.add_argument("--population", type=int, help="Override population_size")
    solve_parser.add_argument("--samples", type=int, help="Override the Monte Carlo sample count")
    solve_parser.add_argument("-o", "--output", required=True, help="Output directory")
    solve_parser.add_argument("--budget", type=float, help="Report front members with cost <= BUDGET")
    solve_parser.add_argument("--deadline", type=float, help="Report front members with time <= DEADLINE")

    # bench
    bench_parser = subparsers.add_parser("bench", help="Run a benchmark grid")
    source = bench_parser.add_mutually_exclusive_group(required=True)
    source.add_argument("-c", "--config", help="Experiment config file")
    source.add_argument("--replay", help="Re-execute the experiment recorded in a manifest")
    bench_parser.add_argument("-o", "--output", help="Output directory (default: from config)")
    bench_parser.add_argument("--threads", type=int, help="Worker threads for grid cells")
    bench_parser.add_argument("--seed", type=int, help="Override the master seed")

    # hv
    hv_parser = subparsers.add_parser(
        "hv", help="Recompute the hypervolume of a front file",
        description="Without --bounds the front is normalised by its own range. An objective with zero range "
                    "maps to %s, so a single-point front always scores (ref - %s) ** 3; pass the "
                    "bounds.json of a bench run to compare fronts." % (ZERO_RANGE_VALUE, ZERO_RANGE_VALUE))
    hv_parser.add_argument("front", help="Front CSV written by solve or bench")
    hv_parser.add_argument("--bounds", help="bounds.json to normalise with (default: the front's own range, "
                                            "zero-range objectives map to %s)" % ZERO_RANGE_VALUE)
    hv_parser.add_argument("--ref", type=float, default=DEFAULT_REFERENCE,
                           help="Reference coordinate (default: %s)" % DEFAULT_REFERENCE)
    hv_parser.add_argument("--generation", type=int, help="Generation to measure (default: last)")

    # fixture
    fixture_parser = subparsers.add_parser("fixture", help="Emit bundled test networks")
    fixture_parser.add_argument("name", choices=["figure1", "toy10"],
                                help="Fixture name (toy10 is an alias of figure1)")
    fixture_parser.add_argument("-o", "--output", help="Output edge list (default: stdout)")

    # fetch
    fetch_parser = subparsers.add_parser("fetch", help="Show download instructions for benchmark networks")
    fetch_parser.add_argument("name", nargs="?", choices=sorted(DATASETS), help="Dataset name")

    return parser


def load_input_graph(args):
    """Load ``args.graph`` as a serialized graph or an edge list with model flags."""
    if args.graph.endswith((GRAPH_BINARY_EXTENSION, GRAPH_JSON_EXTENSION)):
        return load_graph(args.graph)
    return load_edge_list(args.graph, directed=args.directed, prob_model=ProbabilityModel.parse(args.prob),
                          cost_model=CostModel.parse(args.cost))


def _emit(payload):
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def graph_command(args):
    """Execute graph info / graph sample."""
    logger = get_logger(__name__)
    g = load_input_graph(args)
    if args.graph_command == "info":
        _emit(graph_info(g))
        return EXIT_SUCCESS
    if not 1 <= args.nodes <= g.node_count:
        raise ConfigError("--nodes must lie in [1, %d], got %d" % (g.node_count, args.nodes))
    sample = induced_subgraph(g, args.nodes, args.seed)
    save_graph(sample, args.output)
    logger.info("Wrote %d-node subgraph with %d arcs to %s", sample.node_count, sample.arc_count, args.output)
    return EXIT_SUCCESS


def embed_command(args):
    """Execute embed train / embed inspect."""
    logger = get_logger(__name__)
    if args.embed_command == "train":
        g = load_input_graph(args)
        walk = load_run_settings(args.config)[2] if args.config else WalkConfig()
        walk = WalkConfig.from_dict(dict(walk.to_dict(), rng_seed=args.seed))
        table = train_embeddings(g, walk)
        save_embeddings(table, args.output, g)
        logger.info("Wrote %d x %d embeddings to %s", table.node_count, table.dims, args.output)
        return EXIT_SUCCESS

    g = load_input_graph(args) if args.graph else None
    table = load_embeddings(args.embeddings, g)
    norms = [float(sum(x * x for x in row) ** 0.5) for row in table.vectors.tolist()]
    _emit({
        "nodes": table.node_count,
        "dims": table.dims,
        "trained_on": table.trained_on,
        "mean_norm": sum(norms) / len(norms),
        "covers_graph": None if g is None else table.covers(g),
    })
    return EXIT_SUCCESS


def solve_command(args):
    """Execute one run and print the final front summary."""
    logger = get_logger(__name__)
    g = load_input_graph(args)
    if args.config:
        algorithm, eval_cfg, walk_cfg = load_run_settings(args.config)
    else:
        algorithm, eval_cfg, walk_cfg = {}, EvalConfig(), WalkConfig()
    overrides = {"rng_seed": args.seed, "threads": resolve_threads(args.threads)}
    if args.algorithm:
        overrides["variant"] = args.algorithm
    if args.generations is not None:
        overrides["max_generations"] = args.generations
    if args.population is not None:
        overrides["population_size"] = args.population
    algorithm.update(overrides)
    algo_cfg = AlgoConfig.from_dict(algorithm)
    if args.samples is not None:
        eval_cfg = EvalConfig.from_dict(dict(eval_cfg.to_dict(), mc_samples=args.samples))
    walk_cfg = WalkConfig.from_dict(dict(walk_cfg.to_dict(), rng_seed=args.seed))

    emb = None
    if algo_cfg.needs_embeddings:
        if args.embeddings:
            emb = load_embeddings(args.embeddings, g)
        else:
            emb = train_embeddings(g, walk_cfg)
            save_embeddings(emb, os.path.join(args.output, EMBEDDING_FILE), g)

    result, digest = solve(g, emb, algo_cfg, eval_cfg, args.output, walk_cfg)
    front = result.final_front
    logger.info("%s: %d non-dominated seed sets, HV %.6f (config %s)", algo_cfg.variant, len(front),
                result.hv_trace[-1], digest)
    summary = {
        "algorithm": algo_cfg.variant,
        "config_hash": digest,
        "seed": args.seed,
        "hv": result.hv_trace[-1],
        "front_size": len(front),
        "correlations": objective_correlations(front),
    }
    if args.budget is not None or args.deadline is not None:
        summary["feasible"] = [
            {"seeds": [g.original_id(v) for v in individual.seeds], "influence": individual.objectives.spread,
             "cost": individual.objectives.cost, "time": individual.objectives.time}
            for individual in select_feasible(front, args.budget, args.deadline)
        ]
        if not summary["feasible"]:
            logger.warning("No front member satisfies budget=%s deadline=%s", args.budget, args.deadline)
    _emit(summary)
    return EXIT_SUCCESS


def bench_command(args):
    """Execute a benchmark grid or replay one."""
    logger = get_logger(__name__)
    spec = load_manifest(args.replay) if args.replay else load_experiment(args.config)
    if args.seed is not None:
        spec = replace(spec, master_seed=args.seed).validate()
    threads = resolve_threads(args.threads, spec.threads)
    if args.replay and not args.output:
        raise ConfigError("--replay needs --output so the original results stay untouched")
    report = Experiment(spec, threads=threads, output_dir=args.output).run()
    for network, section in report["networks"].items():
        for variant, row in section["algorithms"].items():
            comparison = section["comparisons"].get(variant, {})
            logger.info("%s %-9s HV %.4f +/- %.4f%s", network, variant, row["hv_mean"], row["hv_std"],
                        "" if comparison.get("p_value") is None else "  p=%.4g vs %s" % (comparison["p_value"],
                                                                                      VARIANT_EVEA))
    return EXIT_SUCCESS


def hv_command(args):
    """Print the hypervolume of one generation of a front file."""
    _, fronts = read_front_csv(args.front)
    if not fronts:
        raise GraphFormatError(args.front, reason="no front rows")
    generation = len(fronts) - 1 if args.generation is None else args.generation
    if not 0 <= generation < len(fronts) or not fronts[generation]:
        raise ConfigError("front file has no generation %d" % generation)
    front = extract_pareto_front(fronts[generation])
    if args.bounds:
        bounds = NormalizationBounds.from_dict(read_json(args.bounds))
        value = front_hypervolume(front, bounds, ref=args.ref)
    else:
        bounds = NormalizationBounds.from_fronts([front])
        flat = [name for name, low, high in zip(OBJECTIVE_NAMES, bounds.lower, bounds.upper) if low == high]
        if flat:
            get_logger(__name__).warning("No --bounds given and %s has zero range in this front; it maps to %s",
                                         "/".join(flat), ZERO_RANGE_VALUE)
        value = front_hypervolume(front, bounds, ref=args.ref)
    sys.stdout.write("%r\n" % value)
    return EXIT_SUCCESS


def fixture_command(args):
    text = toy10_edge_list()
    if args.output:
        write_file(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_SUCCESS


def fetch_command(args):
    """Print where to download the benchmark networks; nothing is downloaded."""
    names = [args.name] if args.name else sorted(DATASETS)
    for name in names:
        entry = DATASETS[name]
        sys.stdout.write("%s: %s (%d nodes, %d edges, %s)\n  %s%s\n  then: gunzip %s\n" % (
            name, entry["description"], entry["nodes"], entry["edges"],
            "directed" if entry["directed"] else "undirected", SNAP_BASE_URL, entry["file"], entry["file"]))
    return EXIT_SUCCESS


COMMANDS = {
    "graph": graph_command,
    "embed": embed_command,
    "solve": solve_command,
    "bench": bench_command,
    "hv": hv_command,
    "fixture": fixture_command,
    "fetch": fetch_command,
}


def exit_code_for(error):
    """Map an exception to the CLI exit code."""
    if isinstance(error, ConfigError):
        return EXIT_USAGE
    if isinstance(error, DATA_ERRORS):
        return EXIT_DATA_ERROR
    return EXIT_RUNTIME_ERROR


def main(argv=None):
    """Main entry function."""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    setup_logging("seedopt", level=level)
    logger = get_logger(__name__)

    sub_command = {"graph": "graph_command", "embed": "embed_command"}.get(args.command)
    if not args.command or (sub_command and not getattr(args, sub_command)):
        parser.print_help()
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](args)
    except Exception as e:
        logger.error("%s", e)
        logger.debug("Traceback", exc_info=True)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
