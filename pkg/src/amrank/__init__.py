"""Connectivity-monotonous vertex rankings for active module recovery."""

from .baselines import bionet_like_ranking, weight_order_ranking
from .benchgen import (empirical_prior_from_sampler, generate_ba_graph, sample_module,
                       sample_module_nonuniform)
from .bum import BumParams, fit_bum, sample_weights, score_vector, vertex_score
from .connected_sets import (ConnectedSetIndex, EnumerationBudgetExceeded,
                             enumerate_connected_sets)
from .evaluation import (ExperimentConfig, TrialResult, auc, is_connectivity_monotonous,
                         results_to_csv, run_experiment, run_trial)
from .graph import Graph, GraphFormatError, is_connected, load_graph, read_graph
from .module_space import (ModulePosterior, ModulePrior, compute_posterior, expected_auc,
                           expected_auc_increment)
from .mwcs import (MwcsInfeasible, MwcsInstance, MwcsSolution, solve_constrained,
                   solve_mwcs)
from .optimal import optimal_ranking, optimal_ranking_from_posterior
from .semiheuristic import refine_ranking, semiheuristic_ranking

__all__ = [
    "BumParams", "ConnectedSetIndex", "EnumerationBudgetExceeded", "ExperimentConfig",
    "Graph", "GraphFormatError", "ModulePosterior", "ModulePrior", "MwcsInfeasible",
    "MwcsInstance", "MwcsSolution", "TrialResult", "auc", "bionet_like_ranking",
    "compute_posterior", "empirical_prior_from_sampler", "enumerate_connected_sets",
    "expected_auc", "expected_auc_increment", "fit_bum", "generate_ba_graph",
    "is_connected", "is_connectivity_monotonous", "load_graph", "optimal_ranking",
    "optimal_ranking_from_posterior", "read_graph", "refine_ranking", "results_to_csv",
    "run_experiment", "run_trial", "sample_module", "sample_module_nonuniform",
    "sample_weights", "score_vector", "semiheuristic_ranking", "solve_constrained",
    "solve_mwcs", "vertex_score", "weight_order_ranking",
]
