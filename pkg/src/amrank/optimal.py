"""Connectivity-monotonous ranking with maximal expected AUC.

Dynamic program over connected vertex sets in order of size. The value of a
set is the best expected AUC accumulated by a connectivity-monotonous
ordering of exactly that set; a set is reached from each of its connected
"one vertex smaller" subsets by appending the missing vertex.

The gain of appending ``v`` to reach prefix set ``P`` is

    sum over modules M containing v of
        (1 - |P \\ M| / |V \\ M|) * post(M) / |M|

Expanding ``|P \\ M| = |P| - |P & M|`` turns it into
``A[v] - |P| * B[v] + sum_{u in P} W[u, v]`` with per-vertex and pairwise
accumulators computed once from the posterior, so every transition costs
O(n) instead of a pass over all modules.
"""

from __future__ import annotations

import logging

import numpy as np

from .connected_sets import DEFAULT_CAP, ConnectedSetIndex, enumerate_connected_sets
from .graph import Graph, is_connected, mask_members
from .module_space import ModulePosterior, ModulePrior, compute_posterior

log = logging.getLogger(__name__)

_CHUNK = 100_000


def _gain_tables(post: ModulePosterior):
    idx = post.index
    n = idx.graph.n
    a = np.zeros(n)
    b = np.zeros(n)
    w = np.zeros((n, n))
    sizes = idx.sizes.astype(float)
    for start in range(0, len(idx), _CHUNK):
        x = idx.membership(start, start + _CHUNK).astype(float)
        p = post.post[start:start + x.shape[0]]
        sz = sizes[start:start + x.shape[0]]
        neg = n - sz
        c = np.where(neg > 0, p / (sz * np.where(neg > 0, neg, 1.0)), 0.0)
        a += (p / sz) @ x
        b += c @ x
        w += (x * c[:, None]).T @ x
    return a, b, w


def _gain_chunks(post: ModulePosterior):
    idx = post.index
    a, b, w = _gain_tables(post)
    for start in range(0, len(idx), _CHUNK):
        x = idx.membership(start, start + _CHUNK).astype(float)
        sz = idx.sizes[start:start + x.shape[0]].astype(float)
        yield start, a[None, :] - sz[:, None] * b[None, :] + x @ w


def transition_gains(post: ModulePosterior) -> np.ndarray:
    """``G[i, v]``: expected-AUC gain when set ``i`` is completed by appending ``v``.

    Only meaningful where ``v`` belongs to set ``i``.
    """
    return np.vstack([chunk for _, chunk in _gain_chunks(post)])


def optimal_ranking_from_posterior(post: ModulePosterior) -> tuple[list[int], float]:
    """Run the dynamic program on a ready posterior over all connected sets."""
    idx = post.index
    g = idx.graph
    full = g.full_mask
    if full not in idx.position:
        raise ValueError("the index must contain the whole vertex set "
                         "(graph connected, no size limit)")
    masks = idx.masks
    position = idx.position
    neg_inf = float("-inf")
    best = [neg_inf] * len(idx)
    back_pred = [-1] * len(idx)
    back_vertex = [-1] * len(idx)
    for start, gains in _gain_chunks(post):
        for off, row in enumerate(gains.tolist()):
            i = start + off
            mask = masks[i]
            members = mask_members(mask)
            if len(members) == 1:
                best[i] = row[members[0]]
                back_vertex[i] = members[0]
                continue
            top = neg_inf
            pred = vert = -1
            for v in members:
                j = position.get(mask ^ (1 << v))
                if j is None:
                    continue
                cand = best[j] + row[v]
                # strict: the smaller appended vertex wins ties
                if cand > top:
                    top, pred, vert = cand, j, v
            best[i] = top
            back_pred[i] = pred
            back_vertex[i] = vert

    i = position[full]
    value = float(best[i])
    order = []
    while i >= 0:
        order.append(back_vertex[i])
        i = back_pred[i]
    order.reverse()
    return order, value


def optimal_ranking(g: Graph, weights, alpha: float,
                    prior: ModulePrior | None = None,
                    cap: int = DEFAULT_CAP,
                    index: ConnectedSetIndex | None = None) -> tuple[list[int], float]:
    """Optimal-on-average ranking and its expected AUC.

    Raises
    ------
    EnumerationBudgetExceeded
        When the graph has more than ``cap`` connected vertex sets.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if not is_connected(g, g.full_mask):
        raise ValueError("graph must be connected")
    if index is None:
        index = enumerate_connected_sets(g, cap=cap)
    log.debug("optimal ranking over %d connected sets", len(index))
    post = compute_posterior(index, prior or ModulePrior.uniform(), weights, alpha)
    return optimal_ranking_from_posterior(post)
