import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amrank.evaluation import (RESULT_COLUMNS, ExperimentConfig, auc,
                               is_connectivity_monotonous, results_to_csv, run_experiment,
                               run_trial, summarize)
from amrank.graph import Graph
from oracles import auc_direct, random_connected_graph


class TestAuc:
    def test_module_first(self):
        assert auc([2, 3, 0, 1, 4], {2, 3}) == 1.0

    def test_module_last(self):
        assert auc([0, 1, 4, 2, 3], {2, 3}) == 0.0

    def test_hand_case(self):
        assert auc([0, 1, 2, 3], {1}) == pytest.approx(2 / 3, abs=0)

    def test_module_is_everything(self):
        assert auc([1, 0], {0, 1}) == 1.0

    def test_empty_module(self):
        with pytest.raises(ValueError):
            auc([0, 1], set())

    def test_not_permutation(self):
        with pytest.raises(ValueError):
            auc([0, 0, 1], {0}, 3)

    def test_random_mean_half(self):
        rng = np.random.default_rng(0)
        vals = [auc(rng.permutation(30), {0, 1, 2, 3, 4}) for _ in range(10_000)]
        assert abs(np.mean(vals) - 0.5) <= 0.02


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 30), st.integers(0, 10**6))
def test_auc_matches_direct(n, seed):
    rng = np.random.default_rng(seed)
    r = [int(v) for v in rng.permutation(n)]
    mod = set(int(v) for v in rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False))
    assert auc(r, mod) == pytest.approx(auc_direct(r, mod), abs=1e-12)


class TestMonotonicity:
    path = Graph(3, [(0, 1), (1, 2)])

    def test_good(self):
        assert is_connectivity_monotonous(self.path, [1, 0, 2])

    def test_bad(self):
        assert not is_connectivity_monotonous(self.path, [0, 2, 1])

    def test_complete_graph(self):
        g = Graph(5, [(a, b) for a in range(5) for b in range(a + 1, 5)])
        rng = np.random.default_rng(1)
        for _ in range(20):
            assert is_connectivity_monotonous(g, list(rng.permutation(5)))

    def test_not_permutation(self):
        with pytest.raises(ValueError):
            is_connectivity_monotonous(self.path, [0, 1])


class TestHarness:
    def test_small_protocol_shape(self):
        cfg = ExperimentConfig(trials=32)
        results = run_experiment(cfg, 1, jobs=4)
        assert len(results) == 32 * 4
        assert all(r.n == 18 and r.module_size == 4 for r in results)
        assert all(0 < r.alpha < 0.5 for r in results)
        assert all(r.auc is not None for r in results)

    def test_medium_protocol_methods(self):
        cfg = ExperimentConfig(trials=1, n=100, module_size_min=5, module_size_max=25,
                               methods=("optimal", "semiheuristic", "bionet",
                                        "weight-order"))
        results = run_trial(cfg, 3, 0)
        by = {r.method: r for r in results}
        assert by["optimal"].optimal_flag == "skipped" and by["optimal"].auc is None
        for m in ("semiheuristic", "bionet", "weight-order"):
            assert by[m].auc is not None
        assert 5 <= by["bionet"].module_size <= 25

    def test_csv_schema_and_determinism(self):
        cfg = ExperimentConfig(trials=3, n=10)
        a = results_to_csv(run_experiment(cfg, 5))
        b = results_to_csv(run_experiment(cfg, 5, jobs=2))
        rows_a = list(csv.reader(io.StringIO(a)))
        rows_b = list(csv.reader(io.StringIO(b)))
        assert tuple(rows_a[0]) == RESULT_COLUMNS
        time_col = RESULT_COLUMNS.index("runtime_ms")
        strip = lambda rows: [r[:time_col] + r[time_col + 1:] for r in rows]
        assert strip(rows_a) == strip(rows_b)

    def test_seed_changes_results(self):
        cfg = ExperimentConfig(trials=2, n=10)
        a = [r.alpha for r in run_experiment(cfg, 1)]
        b = [r.alpha for r in run_experiment(cfg, 2)]
        assert a != b

    def test_empirical_prior_methods(self):
        cfg = ExperimentConfig(trials=1, n=10, methods=("optimal", "optimal-empirical"),
                               sampler="degree-biased", prior_draws=2000)
        results = run_trial(cfg, 0, 0, keep_rankings=True)
        for r in results:
            assert r.auc is not None
            assert sorted(r.ranking) == list(range(10))

    def test_fixed_graph(self):
        g = random_connected_graph(9, np.random.default_rng(2))
        cfg = ExperimentConfig(trials=2, methods=("semiheuristic",))
        results = run_experiment(cfg, 0, graph=g, keep_rankings=True)
        for r in results:
            assert r.n == 9
            assert is_connectivity_monotonous(g, r.ranking)

    def test_summarize(self):
        results = run_experiment(ExperimentConfig(trials=2, n=8), 0)
        summary = summarize(results)
        assert set(summary) == {"optimal", "semiheuristic", "bionet", "weight-order"}
        assert all(0 <= s["mean"] <= 1 for s in summary.values())

    @pytest.mark.parametrize("kwargs", [dict(methods=("nope",)), dict(sampler="x"),
                                        dict(module_size_min=5, module_size_max=4),
                                        dict(alpha_max=1.0)])
    def test_config_validation(self, kwargs):
        with pytest.raises(ValueError):
            ExperimentConfig(**kwargs)
