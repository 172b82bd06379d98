import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amrank.connected_sets import (EnumerationBudgetExceeded, count_spanning_tree_subtrees,
                                   enumerate_connected_sets)
from amrank.graph import Graph
from oracles import all_connected_sets, random_connected_graph


class TestSmallGraphs:
    def test_triangle(self):
        idx = enumerate_connected_sets(Graph(3, [(0, 1), (1, 2), (0, 2)]))
        assert len(idx) == 7
        assert list(idx.sizes) == [1, 1, 1, 2, 2, 2, 3]

    def test_path(self):
        idx = enumerate_connected_sets(Graph(3, [(0, 1), (1, 2)]))
        assert len(idx) == 6
        assert frozenset({0, 2}) not in idx

    def test_single_vertex(self):
        idx = enumerate_connected_sets(Graph(1))
        assert len(idx) == 1
        assert idx[0] == frozenset({0})

    def test_max_size(self):
        idx = enumerate_connected_sets(Graph(3, [(0, 1), (1, 2)]), max_size=2)
        assert len(idx) == 5

    def test_index_lookup(self):
        idx = enumerate_connected_sets(Graph(3, [(0, 1), (1, 2)]))
        for i, s in enumerate(idx):
            assert idx.index_of(s) == i
        with pytest.raises(KeyError):
            idx.index_of({0, 2})

    def test_membership_matrix(self):
        idx = enumerate_connected_sets(Graph(3, [(0, 1), (1, 2)]))
        x = idx.membership()
        expected = np.array([[v in s for v in range(3)] for s in idx])
        np.testing.assert_array_equal(x, expected)


class TestCap:
    def test_cap_exceeded(self):
        g = Graph(12, [(0, v) for v in range(1, 12)])  # star: 2^11 + 11 sets
        with pytest.raises(EnumerationBudgetExceeded) as info:
            enumerate_connected_sets(g, cap=1000)
        assert info.value.cap == 1000

    def test_cap_exact_fits(self):
        g = Graph(3, [(0, 1), (1, 2), (0, 2)])
        assert len(enumerate_connected_sets(g, cap=7)) == 7
        with pytest.raises(EnumerationBudgetExceeded):
            enumerate_connected_sets(g, cap=6)

    def test_large_tree_rejected_quickly(self):
        g = Graph(100, [(i, i + 1) for i in range(99)] + [(0, 50)])
        with pytest.raises(EnumerationBudgetExceeded):
            enumerate_connected_sets(g, cap=1000)

    def test_subtree_count_is_lower_bound(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            g = random_connected_graph(8, rng, 0.3)
            total = len(all_connected_sets(g))
            assert count_spanning_tree_subtrees(g, 10**9) <= total


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 10**6), st.floats(0.0, 0.7))
def test_matches_brute_force(n, seed, p):
    g = random_connected_graph(n, np.random.default_rng(seed), p)
    idx = enumerate_connected_sets(g)
    found = list(idx)
    assert len(found) == len(set(found))
    assert set(found) == set(all_connected_sets(g))
    sizes = [len(s) for s in found]
    assert sizes == sorted(sizes)
