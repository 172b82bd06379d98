import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amrank.baselines import (bionet_like_modules, bionet_like_ranking, combine_modules,
                              threshold_grid, weight_order_ranking)
from amrank.graph import Graph, is_connected
from oracles import random_connected_graph


class TestWeightOrder:
    def test_sort(self):
        assert weight_order_ranking([0.5, 0.1, 0.9]) == [1, 0, 2]

    def test_ties_by_id(self):
        assert weight_order_ranking([0.3] * 5) == [0, 1, 2, 3, 4]

    def test_increasing(self):
        assert weight_order_ranking(np.linspace(0.1, 0.9, 6)) == list(range(6))


class TestBionetLike:
    def test_grid(self):
        np.testing.assert_allclose(threshold_grid([2.0, -1.0], 4), [2.0, 1.0, 0.0, -1.0])

    def test_equal_scores(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)])
        modules, proven = bionet_like_modules(g, np.zeros(4))
        assert proven
        assert len(modules) == 10
        assert all(m == modules[0] for m in modules)
        assert bionet_like_ranking(g, np.zeros(4)) == [0, 1, 2, 3]

    def test_single_edge(self):
        g = Graph(2, [(0, 1)])
        modules, _ = bionet_like_modules(g, [2.0, -1.0])
        assert modules[0] == {0}
        assert bionet_like_ranking(g, [2.0, -1.0]) == [0, 1]

    def test_combine_rule(self):
        order = combine_modules([{2}, {2, 0}, {0, 1, 2}], [0.0, 5.0, 1.0, 9.0], 4)
        assert order == [2, 0, 1, 3]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 20), st.integers(0, 10**6))
def test_chunks_respect_module_order(n, seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(n, rng, 0.15)
    s = rng.normal(size=n)
    modules, _ = bionet_like_modules(g, s)
    r = bionet_like_ranking(g, s)
    assert sorted(r) == list(range(n))
    pos = {v: i for i, v in enumerate(r)}
    first = {}
    for j, m in enumerate(modules):
        assert is_connected(g, m)
        for v in m:
            first.setdefault(v, j)
    for u in range(n):
        for v in range(n):
            if u in first and (v not in first or first[u] < first[v]):
                assert pos[u] < pos[v]
