"""Immutable undirected graphs and connectivity queries.

Vertices are dense integers ``0..n-1``. Each graph also carries the original
labels it was read with so that results can be written back using them.
Vertex sets are accepted either as iterables of ids or as integer bitmasks
(bit ``v`` set means vertex ``v`` is a member); bitmasks are what the
enumeration and dynamic-programming code uses internally.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

VertexSetLike = Union[int, Iterable[int]]


class GraphFormatError(ValueError):
    """Raised for malformed edge lists and invariant violations."""


class Graph:
    """Simple undirected graph over vertices ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : iterable of (int, int)
        Undirected edges. Duplicates (in either orientation) are collapsed.
    labels : sequence of str, optional
        Original vertex labels, ``labels[v]`` for vertex ``v``. Defaults to
        ``str(v)``.
    """

    __slots__ = ("n", "edges", "adj", "adj_mask", "labels", "_label_index")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (),
                 labels: Sequence[str] | None = None):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        neighbors: list[set[int]] = [set() for _ in range(n)]
        edge_set = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"self-loop on vertex {u}")
            a, b = (u, v) if u < v else (v, u)
            edge_set.add((a, b))
            neighbors[a].add(b)
            neighbors[b].add(a)
        self.n = n
        self.edges = frozenset(edge_set)
        self.adj = tuple(tuple(sorted(nb)) for nb in neighbors)
        masks = []
        for nb in neighbors:
            m = 0
            for u in nb:
                m |= 1 << u
            masks.append(m)
        self.adj_mask = tuple(masks)
        if labels is None:
            labels = [str(v) for v in range(n)]
        if len(labels) != n:
            raise ValueError("need exactly one label per vertex")
        self.labels = tuple(str(x) for x in labels)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._label_index) != n:
            raise ValueError("vertex labels must be unique")

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and self.edges == other.edges and self.labels == other.labels)

    def __hash__(self):
        return hash((self.n, self.edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (self.adj_mask[u] >> v) & 1 == 1

    def vertex_of(self, label: str) -> int:
        """Dense id of an original label."""
        try:
            return self._label_index[str(label)]
        except KeyError:
            raise KeyError(f"unknown vertex label {label!r}") from None

    def to_mask(self, s: VertexSetLike) -> int:
        return to_mask(s)

    def subgraph_is_connected(self, s: VertexSetLike) -> bool:
        return is_connected(self, s)

    def to_edge_list_text(self) -> str:
        """Serialize as TSV using the original labels.

        A graph without edges is written as one label per line so that single
        vertices survive a round trip.
        """
        lines = []
        if not self.edges:
            lines = list(self.labels)
        else:
            for u, v in sorted(self.edges):
                lines.append(f"{self.labels[u]}\t{self.labels[v]}")
        return "\n".join(lines) + "\n"


def to_mask(s: VertexSetLike) -> int:
    """Convert a vertex collection (or an existing bitmask) to a bitmask."""
    if isinstance(s, int):
        return s
    m = 0
    for v in s:
        m |= 1 << int(v)
    return m


def mask_members(mask: int) -> list[int]:
    """Vertex ids present in ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def is_connected(g: Graph, s: VertexSetLike) -> bool:
    """True iff the subgraph induced by ``s`` is connected.

    The empty set and singletons count as connected.
    """
    mask = to_mask(s)
    if mask & ~g.full_mask:
        raise ValueError("vertex set contains ids outside the graph")
    if mask == 0:
        return True
    low = mask & -mask
    reached = low
    frontier = low
    adj = g.adj_mask
    while frontier:
        grow = 0
        while frontier:
            b = frontier & -frontier
            grow |= adj[b.bit_length() - 1]
            frontier ^= b
        grow &= mask & ~reached
        reached |= grow
        frontier = grow
    return reached == mask


def connected_component(g: Graph, start: int, allowed: int | None = None) -> int:
    """Bitmask of the component of ``start`` within the ``allowed`` vertices."""
    if allowed is None:
        allowed = g.full_mask
    reached = 1 << start
    frontier = reached
    adj = g.adj_mask
    while frontier:
        grow = 0
        while frontier:
            b = frontier & -frontier
            grow |= adj[b.bit_length() - 1]
            frontier ^= b
        grow &= allowed & ~reached
        reached |= grow
        frontier = grow
    return reached


def _parse_labels(lines: Iterable[str]) -> tuple[list[list[str]], list[str]]:
    rows: list[list[str]] = []
    order: dict[str, None] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        parts = [p.strip() for p in parts if p.strip()]
        if len(parts) not in (1, 2):
            raise GraphFormatError(f"line {lineno}: expected 'u<TAB>v', got {raw!r}")
        if len(parts) == 2 and parts[0] == parts[1]:
            raise GraphFormatError(f"line {lineno}: self-loop on {parts[0]!r}")
        rows.append(parts)
        for p in parts:
            order.setdefault(p, None)
    return rows, list(order)


def _label_order(labels: list[str]) -> list[str]:
    try:
        nums = [int(x) for x in labels]
    except ValueError:
        return labels
    if any(x < 0 for x in nums):
        return labels
    return [lab for _, lab in sorted(zip(nums, labels))]


def load_graph(edge_list_text: str) -> Graph:
    """Parse an edge-list TSV into a :class:`Graph`.

    Each line holds ``u<TAB>v``; a single label on a line declares an
    isolated vertex. Lines starting with ``#`` are ignored. Labels that are
    all nonnegative integers are numbered in numeric order, otherwise in
    order of first appearance.
    """
    rows, labels = _parse_labels(edge_list_text.splitlines())
    labels = _label_order(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    edges = [(index[r[0]], index[r[1]]) for r in rows if len(r) == 2]
    return Graph(len(labels), edges, labels)


def read_graph(path) -> Graph:
    with open(path) as fh:
        return load_graph(fh.read())
