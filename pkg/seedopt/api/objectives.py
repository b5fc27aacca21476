#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""Objective vectors ``(influence, cost, time)`` and Pareto dominance.

Internally every comparison uses the minimization triple ``(-spread, cost, time)``.
"""
# Import built-in modules
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from dataclasses import field
import logging
import math
import threading

# Import third-party modules
import numpy as np

# Import local modules
from seedopt.api.diffusion import DelayDistribution
from seedopt.api.diffusion import RealizationBank
from seedopt.api.diffusion import check_seeds
from seedopt.constants import DEFAULT_MC_SAMPLES
from seedopt.constants import EVAL_MODE_GENERATION
from seedopt.constants import EVAL_MODES
from seedopt.exceptions import ConfigError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ObjectiveVector:
    """Estimated spread ``f1``, exact cost ``f2`` and estimated time ``f3``."""

    spread: float
    cost: float
    time: float

    def __post_init__(self):
        for name in ("spread", "cost", "time"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError("Objective %s must be finite and >= 0, got %r" % (name, value))

    @property
    def minimization(self):
        return (-self.spread, self.cost, self.time)

    def as_row(self):
        """``(influence, cost, time)`` in the maximize/minimize/minimize orientation."""
        return (self.spread, self.cost, self.time)

    @classmethod
    def from_minimization(cls, values):
        spread, cost, time = values
        return cls(-float(spread) + 0.0, float(cost), float(time))


def _as_minimization(vector):
    if isinstance(vector, ObjectiveVector):
        return vector.minimization
    return tuple(vector)


def dominates(a, b):
    """True iff ``a`` is no worse than ``b`` everywhere and strictly better somewhere.

    Accepts :class:`ObjectiveVector` instances or minimization-oriented sequences.
    """
    a = _as_minimization(a)
    b = _as_minimization(b)
    strictly_better = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strictly_better = True
    return strictly_better


@dataclass(frozen=True)
class EvalConfig:
    """How spread and time are estimated.

    ``mode`` is ``generation`` (fresh common random numbers every generation, the whole
    population re-scored) or ``once`` (every individual scored once with ``base_seed``).
    """

    mc_samples: int = DEFAULT_MC_SAMPLES
    delay: DelayDistribution = field(default_factory=DelayDistribution)
    base_seed: int = 0
    cache_enabled: bool = True
    mode: str = EVAL_MODE_GENERATION

    def validate(self):
        errors = []
        if not isinstance(self.mc_samples, int) or self.mc_samples < 1:
            errors.append("mc_samples must be an integer >= 1, got %r" % (self.mc_samples,))
        if self.mode not in EVAL_MODES:
            errors.append("mode must be one of %s, got %r" % (EVAL_MODES, self.mode))
        try:
            self.delay.validate()
        except ConfigError as e:
            errors.extend(e.errors)
        if errors:
            raise ConfigError(errors)
        return self

    def to_dict(self):
        return {
            "mc_samples": self.mc_samples,
            "delay": self.delay.to_dict(),
            "base_seed": self.base_seed,
            "cache_enabled": self.cache_enabled,
            "mode": self.mode,
        }

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        delay = data.pop("delay", {})
        if isinstance(delay, str):
            delay = DelayDistribution.parse(delay)
        else:
            delay = DelayDistribution.from_dict(delay)
        return cls(delay=delay, **data).validate()


def cost(g, s):
    """Exact seed cost ``B(S) = sum of c_i``."""
    seeds = check_seeds(g, s)
    return math.fsum(g.costs[seeds].tolist())


class Evaluator(object):
    """Scores seed sets against one bank of realizations, with memoization.

    Example usage:
        >>> evaluator = Evaluator(graph, EvalConfig(mc_samples=100))
        >>> evaluator.evaluate([3, 4])
        ObjectiveVector(spread=8.0, cost=4.0, time=2.0)
        >>> evaluator.reseed(17)  # new common random numbers, cache cleared
    """

    def __init__(self, g, cfg=None):
        self.graph = g
        self.config = (cfg or EvalConfig()).validate()
        self._lock = threading.Lock()
        self._cache = {}
        self._bank = None
        self._base_seed = self.config.base_seed
        self.hits = 0
        self.misses = 0

    @property
    def base_seed(self):
        return self._base_seed

    def reseed(self, base_seed):
        """Switch to a new base seed; cached vectors become stale and are dropped."""
        with self._lock:
            if base_seed != self._base_seed or self._bank is None:
                self._base_seed = int(base_seed)
                self._bank = None
                self._cache.clear()

    def _get_bank(self):
        with self._lock:
            if self._bank is None:
                self._bank = RealizationBank(self.graph, self.config.mc_samples, self.config.delay,
                                             self._base_seed)
            return self._bank

    def evaluate(self, seeds):
        """Score one seed set.

        Returns:
            ObjectiveVector: Mean spread, exact cost, mean finish time
        """
        key = tuple(check_seeds(self.graph, seeds).tolist())
        if self.config.cache_enabled:
            cached = self._cache.get(key)
            if cached is not None:
                self.hits += 1
                return cached
        spreads, finish_times = self._get_bank().outcomes(key)
        vector = ObjectiveVector(float(np.mean(spreads)), cost(self.graph, key), float(np.mean(finish_times)))
        self.misses += 1
        if self.config.cache_enabled:
            with self._lock:
                vector = self._cache.setdefault(key, vector)
        return vector

    def evaluate_many(self, seed_sets, threads=1):
        """Score many seed sets; output order follows input order for any thread count."""
        seed_sets = list(seed_sets)
        if threads <= 1 or len(seed_sets) < 2:
            return [self.evaluate(seeds) for seeds in seed_sets]
        self._get_bank()
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(self.evaluate, seed_sets))


def evaluate(g, s, cfg=None):
    """Score a single seed set with a throwaway :class:`Evaluator`."""
    return Evaluator(g, cfg).evaluate(s)
