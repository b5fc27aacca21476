#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Single runs and the network x algorithm x repetition benchmark grid."""
# Import built-in modules
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
import logging
import math
import os

# Import third-party modules
import numpy as np

# Import local modules
from seedopt.__version__ import __version__
from seedopt.api.evolution import run
from seedopt.api.metrics import NormalizationBounds
from seedopt.api.metrics import convergence_trace
from seedopt.api.metrics import extract_pareto_front
from seedopt.api.metrics import front_hypervolume
from seedopt.api.metrics import generations_to_fraction
from seedopt.api.metrics import hv_at
from seedopt.api.metrics import objective_correlations
from seedopt.api.metrics import read_front_csv
from seedopt.api.metrics import write_front_csv
from seedopt.api.stats import wilcoxon_signed_rank
from seedopt.config import ExperimentSpec
from seedopt.config import NetworkSpec
from seedopt.config import config_hash
from seedopt.constants import BOUNDS_FILE
from seedopt.constants import CHECKPOINT_GENERATIONS
from seedopt.constants import CONVERGENCE_FRACTION
from seedopt.constants import EMBEDDING_FILE
from seedopt.constants import FRONT_FILE
from seedopt.constants import MANIFEST_FILE
from seedopt.constants import REPORT_FILE
from seedopt.constants import RUN_FILE
from seedopt.constants import SIGNIFICANCE_LEVEL
from seedopt.constants import SUMMARY_FILE
from seedopt.constants import TRACE_FILE
from seedopt.constants import TRACE_HEADER
from seedopt.constants import VARIANT_EVEA
from seedopt.context import get_manager
from seedopt.exceptions import ConfigError
from seedopt.exceptions import StatisticsError
from seedopt.internal.filesystem import ensure_dir
from seedopt.internal.filesystem import read_json
from seedopt.internal.filesystem import write_csv
from seedopt.internal.filesystem import write_json
from seedopt.internal.rng import derive


logger = logging.getLogger(__name__)

SUMMARY_HEADER = ("network", "algorithm", "runs", "hv_mean", "hv_std", "hv_best", "generations_to_90",
                  "wilcoxon_w", "p_value", "improvement_pct")


def run_hash(g, algo_cfg, eval_cfg, walk_cfg=None):
    """Config hash naming a run: everything that determines its output, threads excluded."""
    algorithm = algo_cfg.to_dict()
    algorithm.pop("threads")
    return config_hash({
        "graph": g.fingerprint,
        "algorithm": algorithm,
        "eval": eval_cfg.to_dict(),
        "walk": walk_cfg.to_dict() if walk_cfg is not None and algo_cfg.needs_embeddings else None,
    })


def write_trace_csv(path, trace):
    write_csv(path, TRACE_HEADER, [(generation, hv) for generation, hv in trace])


def solve(g, emb, algo_cfg, eval_cfg, output_dir, walk_cfg=None):
    """Run one optimisation and write ``front.csv``, ``trace.csv`` and ``run.json``.

    Returns:
        tuple: (RunResult, config hash)
    """
    result = run(g, emb, algo_cfg, eval_cfg)
    digest = run_hash(g, algo_cfg, eval_cfg, walk_cfg)
    ensure_dir(output_dir)
    write_front_csv(os.path.join(output_dir, FRONT_FILE), result.fronts, result.hv_trace, digest, algo_cfg.rng_seed)
    write_trace_csv(os.path.join(output_dir, TRACE_FILE), convergence_trace(result))
    payload = result.to_dict(g)
    payload["config_hash"] = digest
    if walk_cfg is not None and algo_cfg.needs_embeddings:
        payload["config"]["walk"] = walk_cfg.to_dict()
    payload["version"] = __version__
    write_json(os.path.join(output_dir, RUN_FILE), payload)
    return result, digest


def _mean_std(values):
    values = np.asarray(values, dtype=np.float64)
    std = float(values.std(ddof=1)) if len(values) > 1 else 0.0
    return float(values.mean()), std


class Experiment(object):
    """A benchmark grid defined by an :class:`~seedopt.config.ExperimentSpec`.

    Example usage:
        >>> spec = load_experiment("bench.toml")
        >>> report = Experiment(spec, threads=4).run()
        >>> report["networks"]["grqc"]["algorithms"]["EVEA"]["hv_mean"]
        0.93...

    Cells whose ``run.json`` already exists with the same config hash are not rerun,
    so an interrupted grid resumes where it stopped.
    """

    logger = logging.getLogger(__name__)

    def __init__(self, spec, threads=1, output_dir=None, manager=None):
        self.spec = spec.validate()
        self.threads = max(1, int(threads))
        self.output_dir = os.path.abspath(output_dir or NetworkSpec.resolve(spec.output_dir, spec.base_dir))
        self.manager = manager or get_manager()
        self._graphs = {}
        self._embeddings = {}

    # -- planning ---------------------------------------------------------------------------

    def walk_config(self, network):
        return replace(self.spec.walk, rng_seed=derive(self.spec.master_seed, "walk", network.name))

    def cell_seed(self, network, algo_cfg, repetition):
        return derive(self.spec.master_seed, "run", network.name, algo_cfg.variant, repetition)

    def cell_dir(self, network, algo_cfg, repetition):
        return os.path.join(self.output_dir, network.name, algo_cfg.variant, "rep%02d" % repetition)

    def plan(self):
        """Every grid cell as ``(network, AlgoConfig with its rng_seed, repetition)``."""
        cells = []
        for network in self.spec.networks:
            for algo_cfg in self.spec.algorithms:
                for repetition in range(self.spec.repetitions):
                    seeded = replace(algo_cfg, rng_seed=self.cell_seed(network, algo_cfg, repetition), threads=1)
                    cells.append((network, seeded, repetition))
        return cells

    # -- execution --------------------------------------------------------------------------

    def _prepare(self):
        for network in self.spec.networks:
            g = network.load(self.spec.base_dir)
            self._graphs[network.name] = g
            self.logger.info("Network %s: %d nodes, %d arcs", network.name, g.node_count, g.arc_count)
            if any(algo.needs_embeddings for algo in self.spec.algorithms):
                if network.embeddings:
                    path = network.resolve(network.embeddings, self.spec.base_dir)
                else:
                    path = os.path.join(self.output_dir, network.name, EMBEDDING_FILE)
                self._embeddings[network.name] = self.manager.get_embeddings(g, self.walk_config(network), path)

    def _run_cell(self, cell):
        network, algo_cfg, repetition = cell
        g = self._graphs[network.name]
        emb = self._embeddings.get(network.name)
        walk_cfg = self.walk_config(network)
        directory = self.cell_dir(network, algo_cfg, repetition)
        digest = run_hash(g, algo_cfg, self.spec.eval, walk_cfg)
        run_file = os.path.join(directory, RUN_FILE)
        front_file = os.path.join(directory, FRONT_FILE)
        if os.path.isfile(run_file) and os.path.isfile(front_file) and read_json(run_file).get("config_hash") == digest:
            self.logger.info("Skipping completed cell %s/%s/rep%02d", network.name, algo_cfg.variant, repetition)
            _, fronts = read_front_csv(front_file)
            return fronts
        self.logger.info("Running %s/%s/rep%02d (seed %d)", network.name, algo_cfg.variant, repetition,
                         algo_cfg.rng_seed)
        result, _ = solve(g, emb, algo_cfg, self.spec.eval, directory, walk_cfg)
        return result.fronts

    def run(self):
        """Run (or resume) every cell, then aggregate.

        Returns:
            dict: The experiment report, also written to ``report.json`` and ``summary.csv``
        """
        ensure_dir(self.output_dir)
        self._prepare()
        cells = self.plan()
        self.write_manifest(cells)
        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                outcomes = list(pool.map(self._run_cell, cells))
        else:
            outcomes = [self._run_cell(cell) for cell in cells]
        return self.aggregate(cells, outcomes)

    def write_manifest(self, cells):
        spec = self.spec.to_dict()
        spec["experiment"]["output_dir"] = self.output_dir
        entries = []
        for network, algo_cfg, repetition in cells:
            directory = self.cell_dir(network, algo_cfg, repetition)
            entries.append({
                "network": network.name,
                "algorithm": algo_cfg.variant,
                "repetition": repetition,
                "rng_seed": algo_cfg.rng_seed,
                "walk_seed": self.walk_config(network).rng_seed,
                "config_hash": run_hash(self._graphs[network.name], algo_cfg, self.spec.eval,
                                        self.walk_config(network)),
                "files": [os.path.relpath(os.path.join(directory, name), self.output_dir)
                          for name in (FRONT_FILE, TRACE_FILE, RUN_FILE)],
            })
        write_json(os.path.join(self.output_dir, MANIFEST_FILE), {
            "version": __version__,
            "base_dir": self.spec.base_dir,
            "spec": spec,
            "graphs": {name: g.fingerprint for name, g in self._graphs.items()},
            "cells": entries,
        })

    # -- aggregation ------------------------------------------------------------------------

    def aggregate(self, cells, outcomes):
        """Freeze bounds per network, recompute HV and traces, compare against EVEA."""
        report = {"version": __version__, "master_seed": self.spec.master_seed, "networks": {}}
        summary_rows = []
        for network in self.spec.networks:
            indices = [i for i, cell in enumerate(cells) if cell[0].name == network.name]
            bounds = NormalizationBounds.from_fronts([outcomes[i][-1] for i in indices])
            write_json(os.path.join(self.output_dir, network.name, BOUNDS_FILE), bounds.to_dict())

            per_algorithm = {}
            for algo_cfg in self.spec.algorithms:
                runs = [i for i in indices if cells[i][1].variant == algo_cfg.variant]
                hvs, to_fraction, checkpoints = [], [], []
                pooled = []
                for i in runs:
                    fronts = outcomes[i]
                    trace = [(generation, front_hypervolume(front, bounds, warn=False))
                             for generation, front in enumerate(fronts)]
                    write_trace_csv(os.path.join(self.cell_dir(*cells[i]), TRACE_FILE), trace)
                    hvs.append(trace[-1][1])
                    to_fraction.append(generations_to_fraction(trace, CONVERGENCE_FRACTION))
                    checkpoints.append(hv_at(trace, CHECKPOINT_GENERATIONS))
                    pooled.extend(fronts[-1])
                mean, std = _mean_std(hvs)
                per_algorithm[algo_cfg.variant] = {
                    "runs": len(hvs),
                    "hv": hvs,
                    "hv_mean": mean,
                    "hv_std": std,
                    "hv_best": max(hvs),
                    "generations_to_90": float(np.median(to_fraction)),
                    "hv_at": {str(generation): _mean_or_none([c[generation] for c in checkpoints])
                              for generation in CHECKPOINT_GENERATIONS},
                    "correlations": objective_correlations(extract_pareto_front(pooled)),
                }
            comparisons = self.compare(per_algorithm)
            report["networks"][network.name] = {
                "bounds": bounds.to_dict(),
                "algorithms": per_algorithm,
                "comparisons": comparisons,
            }
            for variant, row in per_algorithm.items():
                comparison = comparisons.get(variant, {})
                summary_rows.append((network.name, variant, row["runs"], row["hv_mean"], row["hv_std"],
                                     row["hv_best"], row["generations_to_90"],
                                     _blank(comparison.get("statistic")), _blank(comparison.get("p_value")),
                                     _blank(comparison.get("improvement_pct"))))

        write_json(os.path.join(self.output_dir, REPORT_FILE), report)
        write_csv(os.path.join(self.output_dir, SUMMARY_FILE), SUMMARY_HEADER, summary_rows)
        return report

    def compare(self, per_algorithm):
        """EVEA against every other variant: relative improvement and paired Wilcoxon."""
        if VARIANT_EVEA not in per_algorithm:
            return {}
        reference = per_algorithm[VARIANT_EVEA]
        comparisons = {}
        for variant, row in per_algorithm.items():
            if variant == VARIANT_EVEA:
                continue
            improvement = None
            if row["hv_mean"] > 0:
                improvement = (reference["hv_mean"] - row["hv_mean"]) / row["hv_mean"] * 100.0
            entry = {"improvement_pct": improvement, "statistic": None, "p_value": None, "significant": None}
            try:
                statistic, p_value = wilcoxon_signed_rank(reference["hv"], row["hv"])
                entry.update(statistic=float(statistic), p_value=float(p_value),
                             significant=bool(p_value < SIGNIFICANCE_LEVEL))
            except StatisticsError as e:
                entry["note"] = str(e)
                self.logger.info("No Wilcoxon test for EVEA vs %s: %s", variant, e)
            comparisons[variant] = entry
        return comparisons


def _mean_or_none(values):
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


def _blank(value):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return value


def run_experiment(spec, threads=1, output_dir=None):
    """Run a full experiment grid and return its report."""
    return Experiment(spec, threads=threads, output_dir=output_dir).run()


def load_manifest(path):
    """Rebuild the :class:`ExperimentSpec` recorded in a manifest for replay.

    Raises:
        ConfigError: If the manifest is unreadable
    """
    try:
        manifest = read_json(path)
        spec = ExperimentSpec.from_dict(manifest["spec"], base_dir=manifest.get("base_dir"))
    except (KeyError, ValueError, OSError) as e:
        raise ConfigError("unreadable manifest: %s" % e, source=path)
    return spec


__all__ = ["Experiment", "load_manifest", "run_experiment", "run_hash", "solve"]
