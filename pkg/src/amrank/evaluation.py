"""Ranking metrics and the experiment harness."""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .baselines import bionet_like_ranking, weight_order_ranking
from .benchgen import (empirical_prior_from_sampler, generate_ba_graph,
                       sample_module_nonuniform)
from .bum import score_vector
from .bum import sample_weights
from .connected_sets import DEFAULT_CAP, EnumerationBudgetExceeded, enumerate_connected_sets
from .graph import Graph, to_mask
from .module_space import ModulePrior
from .mwcs import DEFAULT_BUDGET
from .optimal import optimal_ranking
from .semiheuristic import RefinementStats, semiheuristic_ranking

log = logging.getLogger(__name__)

RESULT_COLUMNS = ("trial_id", "n", "m_edges", "module_size", "alpha", "method",
                  "auc", "runtime_ms", "optimal_flag")

METHODS = ("optimal", "optimal-empirical", "semiheuristic", "bionet", "weight-order")
MONOTONOUS_METHODS = frozenset({"optimal", "optimal-empirical", "semiheuristic"})


def auc(ranking: Sequence[int], module, n: int | None = None) -> float:
    """Area under the recovery curve of ``ranking`` for a known module.

    Mean over module vertices of one minus the fraction of non-module
    vertices ranked at or before them. A module covering every vertex
    scores 1.
    """
    order = list(ranking)
    if n is None:
        n = len(order)
    mod = set(module)
    if not mod:
        raise ValueError("module must be nonempty")
    if len(order) != n or set(order) != set(range(n)):
        raise ValueError("ranking must be a permutation of the vertices")
    if not mod <= set(order):
        raise ValueError("module contains unknown vertices")
    negatives = n - len(mod)
    if negatives == 0:
        return 1.0
    # integer numerator so that the only rounding is the final division
    false_pos = 0
    total = 0
    for v in order:
        if v in mod:
            total += negatives - false_pos
        else:
            false_pos += 1
    return total / (negatives * len(mod))


def is_connectivity_monotonous(g: Graph, ranking: Sequence[int]) -> bool:
    """True iff every prefix of ``ranking`` induces a connected subgraph."""
    order = list(ranking)
    if sorted(order) != list(range(g.n)):
        raise ValueError("ranking must be a permutation of the vertices")
    prefix = 0
    for i, v in enumerate(order):
        if i and not g.adj_mask[v] & prefix:
            return False
        prefix |= 1 << v
    return True


@dataclass
class TrialResult:
    trial_id: int
    n: int
    m_edges: int
    module_size: int
    alpha: float
    method: str
    auc: float | None
    runtime_ms: float
    optimal_flag: str
    ranking: list[int] | None = field(default=None, repr=False)
    module: frozenset[int] | None = field(default=None, repr=False)

    def row(self) -> list[str]:
        return [str(self.trial_id), str(self.n), str(self.m_edges),
                str(self.module_size), repr(float(self.alpha)), self.method,
                "" if self.auc is None else repr(float(self.auc)),
                f"{self.runtime_ms:.3f}", self.optimal_flag]


@dataclass
class ExperimentConfig:
    """Settings for a batch of trials.

    ``graph_file`` replaces generation when given. ``sampler`` is
    ``uniform`` or ``degree-biased`` (seed vertex drawn proportionally to
    ``degree ** bias_exponent``). ``prior`` chooses the prior of the
    ``optimal`` method (``uniform`` over all connected sets, or
    ``empirical``); ``optimal-empirical`` always uses the sampler's
    empirical distribution estimated from ``prior_draws`` draws.
    """

    trials: int = 32
    n: int = 18
    m: int = 1
    module_size_min: int = 4
    module_size_max: int = 4
    alpha_min: float = 0.0
    alpha_max: float = 0.5
    methods: tuple[str, ...] = ("optimal", "semiheuristic", "bionet", "weight-order")
    graph_file: str | None = None
    sampler: str = "uniform"
    bias_exponent: float = 1.0
    prior: str = "uniform"
    prior_draws: int = 20_000
    budget: int | None = DEFAULT_BUDGET
    time_limit: float | None = None
    cap: int = DEFAULT_CAP
    thresholds: int = 10

    def __post_init__(self):
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ValueError(f"unknown method(s): {', '.join(bad)}")
        if self.sampler not in ("uniform", "degree-biased"):
            raise ValueError(f"unknown sampler {self.sampler!r}")
        if self.prior not in ("uniform", "empirical"):
            raise ValueError(f"unknown prior {self.prior!r}")
        if not 1 <= self.module_size_min <= self.module_size_max:
            raise ValueError("bad module size range")
        if not 0 <= self.alpha_min <= self.alpha_max < 1:
            raise ValueError("alpha range must lie inside [0, 1)")


def _sampler(cfg: ExperimentConfig):
    bias = cfg.bias_exponent if cfg.sampler == "degree-biased" else 0.0

    def draw(g, k, seed):
        return sample_module_nonuniform(g, k, bias, seed)
    return draw


def _trial_seeds(master_seed: int, trial: int):
    seq = np.random.SeedSequence([int(master_seed), int(trial)])
    return seq.spawn(5)


def run_trial(cfg: ExperimentConfig, rng_seed: int, trial_id: int = 0,
              graph: Graph | None = None, keep_rankings: bool = False) -> list[TrialResult]:
    """Generate (or reuse) an instance, plant a module, and run every method.

    Methods that cannot run on the instance (the optimal ranker over the
    enumeration cap) are recorded with an empty AUC and flag ``skipped``.
    """
    s_graph, s_module, s_alpha, s_weights, s_prior = _trial_seeds(rng_seed, trial_id)
    g = graph if graph is not None else generate_ba_graph(cfg.n, cfg.m, s_graph)
    rng = np.random.default_rng(s_alpha)
    k = int(rng.integers(cfg.module_size_min, cfg.module_size_max + 1))
    # open interval: alpha = 0 is not a valid shape
    alpha = float(cfg.alpha_min + (cfg.alpha_max - cfg.alpha_min) * (1.0 - rng.random()))
    sampler = _sampler(cfg)
    module = sampler(g, min(k, g.n), s_module)
    weights = sample_weights(g.n, module, alpha, s_weights)
    scores = score_vector(weights, alpha)

    index = None
    index_error = None
    empirical = None
    results = []
    for method in cfg.methods:
        flag = "true"
        ranking = None
        t0 = time.perf_counter()
        try:
            if method in ("optimal", "optimal-empirical"):
                if index is None and index_error is None:
                    try:
                        index = enumerate_connected_sets(g, cap=cfg.cap)
                    except EnumerationBudgetExceeded as exc:
                        index_error = exc
                if index_error is not None:
                    raise index_error
                prior = ModulePrior.uniform()
                if method == "optimal-empirical" or cfg.prior == "empirical":
                    if empirical is None:
                        empirical = empirical_prior_from_sampler(
                            g, len(module), sampler, cfg.prior_draws, s_prior)
                    prior = empirical
                ranking, _ = optimal_ranking(g, weights, alpha, prior, index=index)
            elif method == "semiheuristic":
                stats = RefinementStats()
                ranking = semiheuristic_ranking(g, weights, alpha, cfg.budget,
                                                cfg.time_limit, stats)
                flag = "true" if stats.unproven == 0 else "false"
            elif method == "bionet":
                ranking = bionet_like_ranking(g, scores, cfg.thresholds, cfg.budget,
                                              cfg.time_limit)
                flag = "na"
            elif method == "weight-order":
                ranking = weight_order_ranking(weights)
                flag = "na"
        except EnumerationBudgetExceeded as exc:
            log.info("trial %d: %s skipped (%s)", trial_id, method, exc)
            flag = "skipped"
        elapsed = (time.perf_counter() - t0) * 1000.0
        value = None if ranking is None else auc(ranking, module, g.n)
        results.append(TrialResult(trial_id, g.n, g.edge_count, len(module), alpha,
                                    method, value, elapsed, flag,
                                    ranking if keep_rankings else None,
                                    module if keep_rankings else None))
    return results


def _run_one(args):
    cfg, seed, trial, graph, keep = args
    return run_trial(cfg, seed, trial, graph, keep)


def run_experiment(cfg: ExperimentConfig, rng_seed: int, jobs: int = 1,
                   graph: Graph | None = None,
                   keep_rankings: bool = False) -> list[TrialResult]:
    """All trials of ``cfg``; results are ordered by trial id whatever ``jobs`` is."""
    tasks = [(cfg, rng_seed, t, graph, keep_rankings) for t in range(cfg.trials)]
    if jobs <= 1:
        batches = [_run_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(_run_one, tasks))
    return [r for batch in batches for r in batch]


def results_to_csv(results: Sequence[TrialResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for r in results:
        writer.writerow(r.row())
    return buf.getvalue()


def summarize(results: Sequence[TrialResult]) -> dict[str, dict[str, float]]:
    """Mean and median AUC per method over the trials where it ran."""
    out: dict[str, dict[str, float]] = {}
    for method in dict.fromkeys(r.method for r in results):
        vals = [r.auc for r in results if r.method == method and r.auc is not None]
        if vals:
            out[method] = {"mean": float(np.mean(vals)), "median": float(np.median(vals)),
                           "count": float(len(vals))}
    return out
