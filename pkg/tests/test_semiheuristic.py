import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amrank.evaluation import is_connectivity_monotonous
from amrank.graph import Graph
from amrank.semiheuristic import RefinementStats, refine_ranking, semiheuristic_ranking
from oracles import random_connected_graph, random_connected_split


class TestExamples:
    def test_single_edge(self):
        assert semiheuristic_ranking(Graph(2, [(0, 1)]), [0.04, 0.25], 0.5) == [0, 1]

    def test_star(self):
        g = Graph(4, [(0, 1), (0, 2), (0, 3)])
        r = semiheuristic_ranking(g, [0.9, 0.001, 0.5, 0.5], 0.1)
        assert r[:2] == [1, 0]
        assert set(r[2:]) == {2, 3}

    def test_single_candidate(self):
        assert refine_ranking(Graph(2, [(0, 1)]), [0.0, 0.0], {0}, {1}) == [1]

    def test_path_two(self):
        assert refine_ranking(Graph(2, [(0, 1)]), [1.0, -1.0], set(), {0, 1}) == [0, 1]

    def test_single_vertex(self):
        assert semiheuristic_ranking(Graph(1), [0.2], 0.5) == [0]

    def test_disconnected(self):
        with pytest.raises(ValueError):
            semiheuristic_ranking(Graph(3, [(0, 1)]), [0.5] * 3, 0.5)

    def test_solve_count_bound(self):
        rng = np.random.default_rng(5)
        g = random_connected_graph(25, rng, 0.1)
        stats = RefinementStats()
        semiheuristic_ranking(g, rng.random(25), 0.3, stats=stats)
        assert stats.solves <= 2 * g.n
        assert stats.unproven == 0

    def test_tiny_budget_still_monotonous(self):
        rng = np.random.default_rng(6)
        g = random_connected_graph(30, rng, 0.2)
        stats = RefinementStats()
        r = semiheuristic_ranking(g, rng.random(30), 0.2, budget=5, stats=stats)
        assert is_connectivity_monotonous(g, r)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(0, 10**6), st.floats(0.05, 0.95))
def test_monotonous_permutation(n, seed, alpha):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(n, rng, 0.15)
    r = semiheuristic_ranking(g, rng.random(n) + 1e-9, alpha, check=True)
    assert sorted(r) == list(range(n))
    assert is_connectivity_monotonous(g, r)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 15), st.integers(0, 10**6))
def test_refinement_keeps_anchor_prefixes_connected(n, seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(n, rng, 0.2)
    k = int(rng.integers(0, n - 1))
    R, C = random_connected_split(g, rng, k, n)
    order = refine_ranking(g, rng.normal(size=n), R, C, check=True)
    assert sorted(order) == sorted(C)
    if R:
        prefix = set(R)
        for v in order:
            assert any(u in prefix for u in g.neighbors(v))
            prefix.add(v)
