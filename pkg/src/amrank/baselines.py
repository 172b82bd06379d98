"""Reference rankings: plain weight order and a multi-threshold MWCS combination."""

from __future__ import annotations

import numpy as np

from .graph import Graph
from .mwcs import DEFAULT_BUDGET, solve_mwcs


def weight_order_ranking(weights) -> list[int]:
    """Vertices by ascending weight, ties by ascending id.

    Generally not connectivity-monotonous.
    """
    w = np.asarray(weights, dtype=float)
    return [int(v) for v in np.lexsort((np.arange(w.size), w))]


def threshold_grid(scores, thresholds: int = 10) -> np.ndarray:
    """Thresholds from the largest down to the smallest score in equal steps."""
    s = np.asarray(scores, dtype=float)
    if thresholds < 1:
        raise ValueError("need at least one threshold")
    if thresholds == 1:
        return np.array([s.max()])
    return np.linspace(s.max(), s.min(), thresholds)


def bionet_like_modules(g: Graph, scores, thresholds: int = 10,
                        budget: int | None = DEFAULT_BUDGET,
                        time_limit: float | None = None):
    """One MWCS module per threshold, from the most to the least stringent.

    Returns ``(modules, all_proven)``.
    """
    s = np.asarray(scores, dtype=float)
    modules = []
    proven = True
    for tau in threshold_grid(s, thresholds):
        sol = solve_mwcs(g, s - tau, budget=budget, time_limit=time_limit)
        proven &= sol.proven_optimal
        modules.append(sol.vertices)
    return modules, proven


def combine_modules(modules, scores, n: int) -> list[int]:
    """Rank vertices of the first module first, then new vertices of the next, ...

    Vertices covered by no module come last. Inside each chunk vertices are
    ordered by descending score, then ascending id.
    """
    s = np.asarray(scores, dtype=float)

    def chunk_order(vs):
        return sorted(vs, key=lambda v: (-s[v], v))

    seen: set[int] = set()
    order: list[int] = []
    for mod in modules:
        new = [v for v in mod if v not in seen]
        order.extend(chunk_order(new))
        seen.update(new)
    order.extend(chunk_order(v for v in range(n) if v not in seen))
    return order


def bionet_like_ranking(g: Graph, scores, thresholds: int = 10,
                        budget: int | None = DEFAULT_BUDGET,
                        time_limit: float | None = None) -> list[int]:
    """Combine MWCS modules found at equally spaced score thresholds."""
    modules, _ = bionet_like_modules(g, scores, thresholds, budget, time_limit)
    return combine_modules(modules, scores, g.n)
