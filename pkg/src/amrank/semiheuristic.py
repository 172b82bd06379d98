"""Ranking by recursive refinement with constrained MWCS solves.

Starting from no ranked vertices and every vertex as a candidate, the
highest-scoring connected chunk of candidates that hangs off the ranked part
is peeled off, ranked recursively, appended, and the process repeats on the
remaining candidates. The chunk is always a proper subset of the candidates,
so every recursion level strictly shrinks its input.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .bum import score_vector
from .graph import Graph, is_connected, to_mask
from .mwcs import DEFAULT_BUDGET, solve_constrained

log = logging.getLogger(__name__)


@dataclass
class RefinementStats:
    solves: int = 0
    unproven: int = 0
    nodes: int = 0
    sizes: list[int] = field(default_factory=list)


def refine_ranking(g: Graph, scores, anchors, candidates,
                   budget: int | None = DEFAULT_BUDGET,
                   time_limit: float | None = None,
                   stats: RefinementStats | None = None,
                   check: bool = False) -> list[int]:
    """Order ``candidates`` so that anchors plus any prefix stay connected.

    Parameters
    ----------
    scores : array
        Per-vertex scores; only candidate scores matter.
    anchors, candidates : iterables of vertex ids
        Disjoint; ``anchors`` connected (or empty) and their union connected.
    budget, time_limit
        Per-solve node budget and optional wall-clock cap.
    check : bool
        Assert the connectivity invariants at every call.
    """
    scores = np.asarray(scores, dtype=float)
    if stats is None:
        stats = RefinementStats()
    R = set(anchors)
    C = set(candidates)
    if check:
        assert not (R & C)
        assert is_connected(g, R) and is_connected(g, R | C)
    order: list[int] = []
    while C:
        if len(C) == 1:
            chunk = list(C)
        else:
            sol = solve_constrained(g, scores, R, C, budget=budget, time_limit=time_limit)
            stats.solves += 1
            stats.nodes += sol.nodes
            stats.sizes.append(len(C))
            if not sol.proven_optimal:
                stats.unproven += 1
            chunk = sorted(sol.chosen)
            if len(chunk) > 1:
                chunk = refine_ranking(g, scores, R, chunk, budget, time_limit,
                                       stats, check)
        order.extend(chunk)
        R.update(chunk)
        C.difference_update(chunk)
    return order


def semiheuristic_ranking(g: Graph, weights, alpha: float,
                          budget: int | None = DEFAULT_BUDGET,
                          time_limit: float | None = None,
                          stats: RefinementStats | None = None,
                          check: bool = False) -> list[int]:
    """Connectivity-monotonous ranking of all vertices of a connected graph."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if not is_connected(g, g.full_mask):
        raise ValueError("graph must be connected")
    scores = score_vector(weights, alpha)
    return refine_ranking(g, scores, (), range(g.n), budget, time_limit, stats, check)
