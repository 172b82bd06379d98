"""Priors and posteriors over candidate modules, and expected AUC.

The candidate modules are the connected vertex sets of a
:class:`~amrank.connected_sets.ConnectedSetIndex`. Given vertex weights and
the beta shape ``alpha``, the posterior of a module is proportional to its
prior times the product of beta densities of its members (noise vertices
contribute a uniform density of 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .bum import score_vector
from .connected_sets import ConnectedSetIndex
from .graph import Graph, is_connected, to_mask

_CHUNK = 200_000


class PriorError(ValueError):
    pass


@dataclass(frozen=True)
class ModulePrior:
    """Prior over modules: uniform over all connected sets, or empirical.

    For the empirical kind, ``support`` holds bitmasks and ``probs`` their
    masses, normalised to sum to one.
    """

    kind: str = "uniform"
    support: tuple[int, ...] = ()
    probs: tuple[float, ...] = ()

    @classmethod
    def uniform(cls) -> "ModulePrior":
        return cls("uniform")

    @classmethod
    def empirical(cls, items, graph: Graph | None = None) -> "ModulePrior":
        """Build from ``(vertex set, mass)`` pairs; masses are normalised.

        Repeated sets have their masses added.
        """
        acc: dict[int, float] = {}
        for s, p in items:
            if p < 0:
                raise PriorError("prior masses must be nonnegative")
            m = to_mask(s)
            if m == 0:
                raise PriorError("empty module in prior")
            if graph is not None and not is_connected(graph, m):
                raise PriorError("prior support set does not induce a connected subgraph")
            acc[m] = acc.get(m, 0.0) + float(p)
        total = sum(acc.values())
        if not acc or total <= 0:
            raise PriorError("empirical prior needs positive total mass")
        keys = sorted(acc)
        return cls("empirical", tuple(keys), tuple(acc[k] / total for k in keys))

    @classmethod
    def point_mass(cls, s) -> "ModulePrior":
        return cls.empirical([(s, 1.0)])

    def log_prior(self, idx: ConnectedSetIndex) -> np.ndarray:
        """Log prior mass of every set in ``idx`` (``-inf`` outside the support)."""
        if self.kind == "uniform":
            return np.full(len(idx), -np.log(len(idx)))
        if self.kind != "empirical":
            raise PriorError(f"unknown prior kind {self.kind!r}")
        out = np.full(len(idx), -np.inf)
        for m, p in zip(self.support, self.probs):
            i = idx.position.get(m)
            if i is None:
                raise PriorError("prior references a vertex set absent from the "
                                 "connected-set index")
            if p > 0:
                out[i] = np.log(p)
        return out


@dataclass(frozen=True)
class ModulePosterior:
    index: ConnectedSetIndex
    log_post: np.ndarray = field(repr=False)
    post: np.ndarray = field(repr=False)


def set_score_sums(idx: ConnectedSetIndex, scores: np.ndarray) -> np.ndarray:
    """Sum of vertex scores over each set of the index."""
    out = np.empty(len(idx))
    for start in range(0, len(idx), _CHUNK):
        x = idx.membership(start, start + _CHUNK)
        out[start:start + x.shape[0]] = x.astype(float) @ scores
    return out


def compute_posterior(idx: ConnectedSetIndex, prior: ModulePrior, weights,
                      alpha: float) -> ModulePosterior:
    """Posterior over the sets of ``idx`` given vertex weights.

    Normalisation is done in log space (log-sum-exp), so the evidence is
    never formed explicitly.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    scores = score_vector(weights, alpha)
    if scores.shape != (idx.graph.n,):
        raise ValueError("need one weight per vertex")
    log_unnorm = prior.log_prior(idx) + set_score_sums(idx, scores)
    log_post = log_unnorm - logsumexp(log_unnorm)
    return ModulePosterior(idx, log_post, np.exp(log_post))


def _rank_positions(order: Sequence[int], n: int) -> np.ndarray:
    order = np.asarray(order, dtype=np.int64)
    if order.shape != (n,) or not np.array_equal(np.sort(order), np.arange(n)):
        raise ValueError("ranking must be a permutation of the graph's vertices")
    return order


def set_aucs(idx: ConnectedSetIndex, ranking: Sequence[int],
             start: int = 0, stop: int | None = None) -> np.ndarray:
    """AUC of ``ranking`` against each set ``idx[start:stop]`` taken as the module."""
    n = idx.graph.n
    order = _rank_positions(ranking, n)
    x = idx.membership(start, stop)[:, order].astype(float)
    size = x.sum(axis=1)
    true_pos = np.cumsum(x, axis=1)
    false_pos = np.arange(1, n + 1) - true_pos
    negatives = n - size
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(negatives[:, None] > 0, false_pos / negatives[:, None], 0.0)
    return ((1.0 - frac) * x).sum(axis=1) / size


def expected_auc(ranking: Sequence[int], post: ModulePosterior) -> float:
    """Posterior-weighted AUC of a full ranking."""
    idx = post.index
    total = 0.0
    for start in range(0, len(idx), _CHUNK):
        a = set_aucs(idx, ranking, start, start + _CHUNK)
        total += float(a @ post.post[start:start + a.size])
    return total


def expected_auc_increment(prefix, v: int, post: ModulePosterior) -> float:
    """Gain in expected AUC from ranking ``v`` right after the rest of ``prefix``.

    ``prefix`` is the set of the first k ranked vertices and must contain
    ``v`` (the k-th one). The contribution only depends on this set and on
    ``v``, which is what makes the optimal ranker's dynamic program exact.
    """
    pmask = to_mask(prefix)
    if not (pmask >> v) & 1:
        raise ValueError("the appended vertex must belong to the prefix")
    idx = post.index
    n = idx.graph.n
    prefix_col = np.zeros(n, dtype=bool)
    prefix_col[[u for u in range(n) if (pmask >> u) & 1]] = True
    total = 0.0
    for start in range(0, len(idx), _CHUNK):
        x = idx.membership(start, start + _CHUNK)
        rows = x[:, v]
        if not rows.any():
            continue
        xs = x[rows]
        p = post.post[start:start + x.shape[0]][rows]
        size = xs.sum(axis=1)
        outside_prefix = (prefix_col[None, :] & ~xs).sum(axis=1)
        negatives = n - size
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.where(negatives > 0, outside_prefix / negatives, 0.0)
        total += float(np.sum((1.0 - frac) * p / size))
    return total
