"""Maximum-weight connected subgraph (MWCS) by branch and bound.

Two entry points:

* :func:`solve_mwcs` -- a nonempty connected vertex set with maximal total
  score.
* :func:`solve_constrained` -- the variant used for ranking refinement. Given
  already ranked *anchors* ``R`` and *candidates* ``C``, find a connected
  ``S`` that touches ``R`` (when ``R`` is nonempty) and contains at least one
  but not all candidates, maximising the score of ``S & C``. Anchors are
  free connectors.

Since ``R`` is connected and free, any feasible ``S`` can be widened to
contain all of ``R``; the anchors are therefore contracted into a single root
and the problem becomes a rooted MWCS. "Not all of C" is enforced by an
outer best-first search that bans one candidate at a time whenever the
relaxed optimum takes every candidate.

The inner solver first applies value-preserving reductions (merging adjacent
nonnegative vertices, absorbing nonnegative neighbours of the root, removing
or absorbing leaves, collapsing chains of nonpositive degree-2 vertices,
dropping nonpositive shortcut vertices), then runs a depth-first branch and
bound on what remains.

The search is bounded by a node budget (deterministic) and optionally by
wall-clock time. When a budget runs out the best solution found so far is
returned with ``proven_optimal=False``.
"""

from __future__ import annotations

import heapq
import sys
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import Graph, connected_component, to_mask

DEFAULT_BUDGET = 200_000
_TIE = 1e-10
_ROOT = -1


@dataclass(frozen=True)
class MwcsSolution:
    """Result of an MWCS solve.

    ``vertices`` is connected; ``chosen`` is the part that enters the
    objective (all of ``vertices`` for the plain problem, ``vertices & C``
    for the constrained one).
    """

    vertices: frozenset[int]
    chosen: frozenset[int]
    total_score: float
    proven_optimal: bool
    nodes: int = 0


class MwcsInfeasible(ValueError):
    pass


class _Budget:
    __slots__ = ("left", "deadline", "used", "exhausted")

    def __init__(self, nodes: int | None, seconds: float | None):
        self.left = float("inf") if nodes is None else int(nodes)
        self.deadline = None if seconds is None else time.monotonic() + seconds
        self.used = 0
        self.exhausted = False

    def tick(self) -> bool:
        if self.exhausted:
            return False
        self.used += 1
        self.left -= 1
        if self.left < 0:
            self.exhausted = True
        elif self.deadline is not None and self.used % 256 == 0 \
                and time.monotonic() > self.deadline:
            self.exhausted = True
        return not self.exhausted


@dataclass
class _Incumbent:
    value: float = float("-inf")
    members: tuple[int, ...] | None = None

    def offer(self, value: float, members: Iterable[int]) -> None:
        if self.members is None or value > self.value + _TIE:
            self.value = value
            self.members = tuple(sorted(members))
        elif value >= self.value - _TIE:
            cand = tuple(sorted(members))
            if cand < self.members:
                self.value = value
                self.members = cand


@dataclass
class _Work:
    """Contracted working graph of super-vertices."""

    nb: dict[int, set[int]]
    w: dict[int, float]
    mem: dict[int, list[int]]
    cnt: dict[int, int]  # number of members that satisfy the "need" predicate
    root: int | None
    # (value, members, need count) of solutions a reduction may have cut off
    candidates: list[tuple[float, list[int], int]] = field(default_factory=list)

    def note(self, v):
        self.candidates.append((self.w[v], list(self.mem[v]), self.cnt[v]))

    def note_with_root(self, v):
        r = self.root
        if r is not None and r in self.nb[v]:
            self.candidates.append((self.w[r] + self.w[v], self.mem[r] + self.mem[v],
                                    self.cnt[r] + self.cnt[v]))

    def delete(self, v):
        for u in self.nb.pop(v):
            self.nb[u].discard(v)
        del self.w[v], self.mem[v], self.cnt[v]

    def merge(self, keep, gone):
        self.w[keep] += self.w[gone]
        self.mem[keep] = self.mem[keep] + self.mem[gone]
        self.cnt[keep] += self.cnt[gone]
        gone_nb = self.nb.pop(gone)
        keep_nb = self.nb[keep]
        keep_nb.discard(gone)
        for u in gone_nb:
            if u == keep:
                continue
            s = self.nb[u]
            s.discard(gone)
            s.add(keep)
            keep_nb.add(u)
        del self.w[gone], self.mem[gone], self.cnt[gone]
        return keep_nb


def _reduce(work: _Work, record_candidates: bool) -> None:
    nb, w, root = work.nb, work.w, work.root
    queue = deque(sorted(k for k in nb if k != root))
    queued = set(queue)

    def push(vs):
        for x in sorted(vs):
            if x != root and x not in queued and x in nb:
                queued.add(x)
                queue.append(x)

    while queue:
        v = queue.popleft()
        queued.discard(v)
        if v not in nb:
            continue
        wv = w[v]
        nv = nb[v]
        deg = len(nv)
        if deg == 0:
            if record_candidates:
                work.note(v)
            work.delete(v)
            continue
        if wv >= 0:
            partner = None
            if root is not None and root in nv:
                partner = root
            else:
                for u in sorted(nv):
                    if w[u] >= 0:
                        partner = u
                        break
            if partner is not None:
                affected = work.merge(partner, v)
                push(affected | ({partner} if partner != root else set()))
                continue
            if deg == 1:
                (u,) = nv
                if record_candidates:
                    work.note(v)
                affected = work.merge(u, v)
                push(affected | ({u} if u != root else set()))
                continue
            continue
        # wv < 0; a set trimmed down to the bare root is covered by the
        # root-plus-vertex candidates noted before each change
        if deg == 1:
            (u,) = nv
            work.note_with_root(v)
            work.delete(v)
            push([u])
            continue
        if deg == 2:
            a, b = sorted(nv)
            if b in nb[a]:
                work.note_with_root(v)
                work.delete(v)
                push([a, b])
                continue
            for x in (a, b):
                if x != root and w[x] < 0 and len(nb[x]) == 2:
                    work.note_with_root(v)
                    work.note_with_root(x)
                    affected = work.merge(v, x)
                    push(affected | {v})
                    break


class _Search:
    """Depth-first branch and bound on a reduced working graph."""

    def __init__(self, work: _Work, budget: _Budget, inc: _Incumbent,
                 need: bool):
        self.work = work
        self.budget = budget
        self.inc = inc
        self.need = need
        self.complete = True

    def offer(self, S, value, cnt):
        if self.need and cnt == 0:
            return
        members = []
        mem = self.work.mem
        for s in S:
            members.extend(mem[s])
        self.inc.offer(value, members)

    def reachable_positives(self, S, E):
        """Positive vertices reachable from ``S`` without entering ``E``.

        Adding a reachable vertex to ``S`` leaves this set unchanged, so it is
        only recomputed when ``E`` grows.
        """
        nb, w = self.work.nb, self.work.w
        seen = set(S)
        stack = list(S)
        out = []
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if y not in seen and y not in E:
                    seen.add(y)
                    stack.append(y)
                    if w[y] > 0:
                        out.append(y)
        return out

    def bound(self, S, E, value, positives):
        nb, w = self.work.nb, self.work.w
        shares = {}
        total = value
        for p in positives:
            if p in S:
                continue
            best_cost = None
            for u in nb[p]:
                if u in E or u in S:
                    continue
                k = shares.get(u)
                if k is None:
                    k = sum(1 for z in nb[u] if w[z] > 0 and z not in E and z not in S)
                    shares[u] = k
                c = -w[u] / k
                if best_cost is None or c < best_cost:
                    best_cost = c
            if best_cost is None:
                continue
            gain = w[p] - best_cost
            if gain > 0:
                total += gain
        return total

    def run(self, S, value, E, frontier, cnt, positives=None):
        if not self.budget.tick():
            self.complete = False
            return
        nb, w, ccount = self.work.nb, self.work.w, self.work.cnt
        S = set(S)
        frontier = set(frontier)
        grew = True
        while grew:
            grew = False
            for f in sorted(frontier):
                if w[f] >= 0:
                    frontier.discard(f)
                    S.add(f)
                    value += w[f]
                    cnt += ccount[f]
                    for y in nb[f]:
                        if y not in S and y not in E:
                            frontier.add(y)
                    grew = True
        self.offer(S, value, cnt)
        if not frontier:
            return
        if positives is None:
            positives = self.reachable_positives(S, E)
        if self.bound(S, E, value, positives) <= self.inc.value + _TIE:
            return

        def promise(f):
            gain = w[f]
            for y in nb[f]:
                if y not in S and y not in E and w[y] > 0:
                    gain += w[y]
            return gain

        f = max(sorted(frontier), key=promise)
        inc_frontier = (frontier | {y for y in nb[f] if y not in S and y not in E}) - {f}
        self.run(S | {f}, value + w[f], E, inc_frontier, cnt + ccount[f], positives)
        self.run(S, value, E | {f}, frontier - {f}, cnt, positives)


def _build_work(g: Graph, weight, allowed: set[int], root: frozenset[int] | None,
                need_mask: int) -> _Work:
    if root:
        rmask = to_mask(root)
        comp = connected_component(g, min(root), to_mask(allowed) | rmask)
        nodes = [v for v in allowed if (comp >> v) & 1 and v not in root]
    else:
        nodes = sorted(allowed)
    node_set = set(nodes)
    nb = {}
    for v in nodes:
        s = {u for u in g.adj[v] if u in node_set}
        if root and any(u in root for u in g.adj[v]):
            s.add(_ROOT)
        nb[v] = s
    w = {v: float(weight[v]) for v in nodes}
    mem = {v: [v] for v in nodes}
    cnt = {v: (need_mask >> v) & 1 for v in nodes}
    if root:
        nb[_ROOT] = {v for v in nodes if _ROOT in nb[v]}
        w[_ROOT] = float(sum(weight[v] for v in root))
        mem[_ROOT] = sorted(root)
        cnt[_ROOT] = sum((need_mask >> v) & 1 for v in root)
    return _Work(nb, w, mem, cnt, _ROOT if root else None)


def _solve_free(g: Graph, weight, allowed: set[int], root: frozenset[int] | None,
                need_mask: int, need: bool, reduce: bool, budget: _Budget,
                inc: _Incumbent) -> bool:
    """Maximise over connected sets inside ``allowed`` (containing ``root`` if given).

    With ``need`` set, only sets containing a vertex of ``need_mask`` count.
    Improves ``inc`` in place; returns whether the search completed.
    """
    if root is None and not need and reduce:
        if not any(weight[v] > 0 for v in allowed):
            best = min(allowed, key=lambda v: (-weight[v], v))
            inc.offer(float(weight[best]), [best])
            return True
    work = _build_work(g, weight, allowed, root, need_mask)
    if reduce:
        _reduce(work, record_candidates=root is None)
        for val, members, cnt in work.candidates:
            if cnt or not need:
                inc.offer(val, members)
    search = _Search(work, budget, inc, need)
    if work.root is not None:
        r = work.root
        cnt = work.cnt[r]
        search.run({r}, work.w[r], frozenset(), set(work.nb[r]), cnt)
        return search.complete
    if need or not reduce:
        starts = sorted(work.nb, key=lambda v: min(work.mem[v]))
    else:
        starts = sorted((v for v in work.nb if work.w[v] > 0),
                        key=lambda v: (-work.w[v], min(work.mem[v])))
    banned: set[int] = set()
    for s in starts:
        search.run({s}, work.w[s], frozenset(banned),
                   {y for y in work.nb[s] if y not in banned}, work.cnt[s])
        banned.add(s)
        if budget.exhausted:
            break
    return search.complete and not budget.exhausted


def _with_recursion_room(n):
    limit = sys.getrecursionlimit()
    if limit < 4 * n + 1000:
        sys.setrecursionlimit(4 * n + 1000)


def solve_mwcs(g: Graph, scores, budget: int | None = DEFAULT_BUDGET,
               time_limit: float | None = None,
               allowed: Iterable[int] | None = None) -> MwcsSolution:
    """Nonempty connected vertex set with maximal score sum.

    When every score is negative the best single vertex is returned. Among
    equal-score solutions found, the lexicographically smallest sorted vertex
    list is kept.
    """
    scores = np.asarray(scores, dtype=float)
    if scores.shape != (g.n,):
        raise ValueError("need one score per vertex")
    allowed_set = set(range(g.n)) if allowed is None else set(allowed)
    if not allowed_set:
        raise ValueError("no vertices to choose from")
    _with_recursion_room(len(allowed_set))
    weight = scores.tolist()
    bud = _Budget(budget, time_limit)
    inc = _Incumbent()
    complete = _solve_free(g, weight, allowed_set, None, 0, False, True, bud, inc)
    members = frozenset(inc.members)
    return MwcsSolution(members, members, float(sum(scores[list(members)])),
                        complete and not bud.exhausted, bud.used)


def solve_constrained(g: Graph, scores, anchors: Iterable[int],
                      candidates: Iterable[int],
                      budget: int | None = DEFAULT_BUDGET,
                      time_limit: float | None = None,
                      restrict_to_union: bool = True) -> MwcsSolution:
    """Constrained MWCS used by the refinement ranker.

    Finds connected ``S`` with ``S & R`` nonempty (if ``R`` is), and
    ``1 <= |S & C| < |C|``, maximising the summed score of ``S & C``.
    Anchor scores never count. With ``restrict_to_union`` (the default)
    ``S`` must lie inside ``R | C``; otherwise outside vertices may be used
    and their scores count.

    The returned ``vertices`` is ``R | chosen`` in the restricted mode.
    A single candidate is returned as is.
    """
    scores = np.asarray(scores, dtype=float)
    if scores.shape != (g.n,):
        raise ValueError("need one score per vertex")
    R = frozenset(int(v) for v in anchors)
    C = frozenset(int(v) for v in candidates)
    if R & C:
        raise ValueError("anchors and candidates must be disjoint")
    if not C:
        raise ValueError("candidate set is empty")
    if len(C) == 1:
        (c,) = C
        return MwcsSolution(R | C, C, float(scores[c]), True, 0)

    weight = scores.tolist()
    for v in R:
        weight[v] = 0.0
    if restrict_to_union:
        allowed = set(R | C)
    else:
        allowed = set(range(g.n))
    _with_recursion_room(len(allowed))
    c_mask = to_mask(C)
    bud = _Budget(budget, time_limit)
    best = _Incumbent()
    proven = True

    if restrict_to_union:
        # any single candidate next to R (or any candidate when R is empty)
        # is feasible because |C| >= 2
        if R:
            r_mask = to_mask(R)
            ring = [c for c in C if g.adj_mask[c] & r_mask]
            if not ring:
                raise MwcsInfeasible("no candidate is adjacent to the anchor set")
        else:
            ring = list(C)
        first = min(ring, key=lambda v: (-weight[v], v))
        best.offer(weight[first], [first])
        if not any(weight[c] > 0 for c in C):
            return _finish(g, scores, R, C, best, True, bud, restrict_to_union)
    reduce = restrict_to_union

    # best-first over (banned candidates); the relaxation drops "not all of C"
    seq = 0
    heap = [(-float("inf"), seq, frozenset())]
    seen = {frozenset()}
    while heap:
        neg_ub, _, banned = heapq.heappop(heap)
        if -neg_ub <= best.value + _TIE:
            break
        if bud.exhausted:
            proven = False
            break
        local = _Incumbent()
        sub_allowed = allowed - banned
        if R:
            ok = _solve_free(g, weight, sub_allowed, R, c_mask, True, reduce, bud, local)
        else:
            ok = _solve_free(g, weight, sub_allowed, None, c_mask,
                             not restrict_to_union, reduce, bud, local)
        if not ok:
            proven = False
        if local.members is None:
            continue
        chosen = C.intersection(local.members)
        if len(chosen) < len(C):
            best.offer(local.value, local.members)
            continue
        allowed_mask = to_mask(sub_allowed)
        for v in sorted(C - banned):
            child = banned | {v}
            if child in seen:
                continue
            seen.add(child)
            ub = min(local.value, _component_bound(g, weight, allowed_mask & ~(1 << v),
                                                   R, c_mask))
            if ub <= best.value + _TIE:
                continue
            seq += 1
            heapq.heappush(heap, (-ub, seq, child))
    if bud.exhausted:
        proven = False
    return _finish(g, scores, R, C, best, proven, bud, restrict_to_union)


def _component_bound(g: Graph, weight, allowed_mask: int, R, c_mask: int) -> float:
    """Upper bound on any feasible value inside ``allowed_mask``.

    A feasible set lies in one component (the one holding ``R`` if anchors
    exist) that contains a candidate; its value is at most the positive
    score mass of that component, or its best single vertex if none is
    positive.
    """
    if R:
        comps = [connected_component(g, min(R), allowed_mask)]
    else:
        comps = []
        rest = allowed_mask
        while rest:
            low = (rest & -rest).bit_length() - 1
            comp = connected_component(g, low, allowed_mask)
            comps.append(comp)
            rest &= ~comp
    best = float("-inf")
    for comp in comps:
        if not comp & c_mask:
            continue
        total = 0.0
        top = float("-inf")
        m = comp
        while m:
            b = m & -m
            x = weight[b.bit_length() - 1]
            if x > 0:
                total += x
            elif x > top:
                top = x
            m ^= b
        best = max(best, total if total > 0 else top)
    return best


def _finish(g, scores, R, C, best, proven, bud, restrict):
    members = frozenset(best.members)
    chosen = C & members
    if restrict:
        vertices = R | chosen
        total = float(sum(scores[list(chosen)]))
    else:
        vertices = members
        total = float(sum(scores[v] for v in members if v not in R))
    return MwcsSolution(vertices, chosen, total, proven and not bud.exhausted, bud.used)


@dataclass(frozen=True)
class MwcsInstance:
    """Bundle of an MWCS problem; ``solve`` dispatches to the right variant.

    An instance with no anchors and all vertices as candidates is the plain
    MWCS problem.
    """

    graph: Graph
    scores: np.ndarray
    anchors: frozenset[int] = frozenset()
    candidates: frozenset[int] | None = None
    restrict_to_union: bool = True
    budget: int | None = DEFAULT_BUDGET
    time_limit: float | None = None

    def solve(self) -> MwcsSolution:
        if not self.anchors and (self.candidates is None
                                 or len(self.candidates) == self.graph.n):
            return solve_mwcs(self.graph, self.scores, self.budget, self.time_limit)
        cands = self.candidates if self.candidates is not None else \
            frozenset(range(self.graph.n)) - self.anchors
        return solve_constrained(self.graph, self.scores, self.anchors, cands,
                                 self.budget, self.time_limit, self.restrict_to_union)
