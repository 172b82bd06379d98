"""Synthetic benchmark instances: scale-free graphs and planted modules."""

from __future__ import annotations

from collections import Counter
from typing import Callable

import numpy as np

from .graph import Graph
from .module_space import ModulePrior


def generate_ba_graph(n: int, m: int = 1, rng_seed=None) -> Graph:
    """Preferential-attachment graph grown from a single vertex.

    Each new vertex links to ``min(m, existing)`` distinct earlier vertices,
    picked without replacement with probability proportional to
    ``degree + 1``. With ``m = 1`` the result is a tree.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if m < 1 or (n > 1 and m >= n):
        raise ValueError("need 1 <= m < n")
    rng = np.random.default_rng(rng_seed)
    deg = np.zeros(n)
    edges = []
    for v in range(1, n):
        k = min(m, v)
        p = deg[:v] + 1.0
        targets = rng.choice(v, size=k, replace=False, p=p / p.sum())
        for u in sorted(int(t) for t in targets):
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return Graph(n, edges)


def sample_module_nonuniform(g: Graph, k: int, bias_exponent: float = 0.0,
                             rng_seed=None) -> frozenset[int]:
    """Grow a connected module of ``k`` vertices.

    The first vertex is drawn with probability proportional to
    ``degree ** bias_exponent`` (uniform for exponent 0); afterwards a
    uniformly random vertex of the current neighbour frontier is added until
    the module has ``k`` vertices.
    """
    if not 1 <= k <= g.n:
        raise ValueError(f"module size must be in [1, {g.n}]")
    if bias_exponent < 0:
        raise ValueError("bias exponent must be nonnegative")
    rng = np.random.default_rng(rng_seed)
    degs = np.array([g.degree(v) for v in range(g.n)], dtype=float)
    p = degs ** bias_exponent
    if p.sum() == 0:  # edgeless graph
        p = np.ones(g.n)
    start = int(rng.choice(g.n, p=p / p.sum()))
    module = {start}
    frontier = set(g.adj[start])
    while len(module) < k:
        if not frontier:
            raise ValueError("graph component too small for the requested module size")
        options = sorted(frontier)
        v = options[int(rng.integers(len(options)))]
        module.add(v)
        frontier.discard(v)
        frontier.update(u for u in g.adj[v] if u not in module)
    return frozenset(module)


def sample_module(g: Graph, k: int, rng_seed=None) -> frozenset[int]:
    """Connected module grown from a uniformly random start vertex."""
    return sample_module_nonuniform(g, k, 0.0, rng_seed)


Sampler = Callable[[Graph, int, object], frozenset]


def empirical_prior_from_sampler(g: Graph, k: int, sampler: Sampler, draws: int,
                                 rng_seed=None) -> ModulePrior:
    """Prior with mass proportional to how often ``sampler`` produced each module."""
    if draws < 1:
        raise ValueError("draws must be at least 1")
    if isinstance(rng_seed, np.random.SeedSequence):
        # copy: spawn() advances the caller's sequence
        base = np.random.SeedSequence(rng_seed.entropy, spawn_key=rng_seed.spawn_key)
    else:
        base = np.random.SeedSequence(rng_seed)
    seeds = base.spawn(draws)
    counts = Counter(sampler(g, k, s) for s in seeds)
    return ModulePrior.empirical(((mod, c) for mod, c in counts.items()), graph=g)
