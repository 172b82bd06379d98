"""Enumeration of all vertex sets that induce connected subgraphs.

Sets are generated by extension from their smallest vertex: a set rooted at
``v`` only ever grows by vertices larger than ``v`` that are adjacent to the
newest member but not to any earlier one (the exclusive neighbourhood). Each
connected set therefore has exactly one generation path and no duplicate
table is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, mask_members, popcount, to_mask

DEFAULT_CAP = 5_000_000


class EnumerationBudgetExceeded(RuntimeError):
    """The number of connected sets exceeds the configured cap.

    ``count`` is the number of sets seen (or proven to exist) when the
    enumeration stopped; it is a lower bound on the true total.
    """

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(
            f"enumeration budget exceeded: at least {count} connected vertex "
            f"sets, cap is {cap}")


@dataclass(frozen=True)
class ConnectedSetIndex:
    """Connected vertex sets of a graph ordered by nondecreasing size.

    Ties within one size are ordered by bitmask value, so the order is fully
    deterministic.
    """

    graph: Graph
    masks: tuple[int, ...]
    position: dict[int, int] = field(repr=False)
    sizes: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.masks)

    def __getitem__(self, i: int) -> frozenset[int]:
        return frozenset(mask_members(self.masks[i]))

    def __iter__(self):
        return (frozenset(mask_members(m)) for m in self.masks)

    def index_of(self, s) -> int:
        """Position of a set; raises ``KeyError`` if it is not in the index."""
        return self.position[to_mask(s)]

    def __contains__(self, s) -> bool:
        return to_mask(s) in self.position

    def membership(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Boolean matrix ``X[i, v]`` = vertex ``v`` in set ``start + i``."""
        masks = self.masks[start:stop]
        n = self.graph.n
        if n <= 62:
            arr = np.fromiter(masks, dtype=np.int64, count=len(masks))
            return ((arr[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)
        out = np.zeros((len(masks), n), dtype=bool)
        for i, m in enumerate(masks):
            out[i, mask_members(m)] = True
        return out


def count_spanning_tree_subtrees(g: Graph, limit: int) -> int:
    """Number of connected vertex sets of a BFS spanning forest, capped at ``limit``.

    Every subtree of a spanning tree induces a connected subgraph of ``g``,
    so this is a cheap lower bound on the number of connected sets.
    """
    n = g.n
    seen = [False] * n
    parent = [-1] * n
    order = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        for u in queue:
            order.append(u)
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = u
                    queue.append(w)
    # rooted[v] = number of subtrees whose top vertex is v
    rooted = [1] * n
    total = 0
    for v in reversed(order):
        total = min(total + rooted[v], limit)
        p = parent[v]
        if p >= 0:
            rooted[p] = min(rooted[p] * (1 + rooted[v]), limit)
    return total


def enumerate_connected_sets(g: Graph, max_size: int | None = None,
                             cap: int = DEFAULT_CAP) -> ConnectedSetIndex:
    """All nonempty vertex sets of ``g`` inducing a connected subgraph.

    Parameters
    ----------
    g : Graph
    max_size : int, optional
        Largest set size to emit; unbounded by default.
    cap : int
        Maximum number of sets. :class:`EnumerationBudgetExceeded` is raised
        as soon as more sets are known to exist.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    n = g.n
    if max_size is None:
        max_size = n
    if max_size <= 0 or n == 0:
        return _build_index(g, [])
    if max_size >= n:
        lower = count_spanning_tree_subtrees(g, cap + 1)
        if lower > cap:
            raise EnumerationBudgetExceeded(lower, cap)

    adj = g.adj_mask
    found: list[int] = []
    append = found.append
    for v in range(n):
        above = ~((1 << (v + 1)) - 1)
        vbit = 1 << v
        append(vbit)
        if len(found) > cap:
            raise EnumerationBudgetExceeded(len(found), cap)
        # stack of (set, extension candidates, closed neighbourhood, size)
        stack = [(vbit, adj[v] & above, adj[v] | vbit, 1)]
        while stack:
            sub, ext, closed, size = stack.pop()
            if size >= max_size:
                continue
            while ext:
                w = ext & -ext
                ext ^= w
                wi = w.bit_length() - 1
                new_sub = sub | w
                append(new_sub)
                if len(found) > cap:
                    raise EnumerationBudgetExceeded(len(found), cap)
                excl = adj[wi] & ~closed & above
                stack.append((new_sub, ext | excl, closed | adj[wi], size + 1))
    return _build_index(g, found)


def _build_index(g: Graph, found: list[int]) -> ConnectedSetIndex:
    keyed = sorted(found, key=lambda m: (popcount(m), m))
    position = {m: i for i, m in enumerate(keyed)}
    sizes = np.fromiter((popcount(m) for m in keyed), dtype=np.int64, count=len(keyed))
    return ConnectedSetIndex(g, tuple(keyed), position, sizes)
