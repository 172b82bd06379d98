"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 infeasible problem or exceeded
budget, 3 unreadable or malformed input/output files.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import io as fio
from .baselines import bionet_like_ranking, weight_order_ranking
from .benchgen import generate_ba_graph, sample_module
from .bum import fit_bum, sample_weights, score_vector
from .connected_sets import DEFAULT_CAP, EnumerationBudgetExceeded
from .evaluation import (auc, is_connectivity_monotonous, results_to_csv,
                         run_experiment, summarize)
from .graph import is_connected, load_graph
from .mwcs import DEFAULT_BUDGET, MwcsInfeasible, solve_constrained, solve_mwcs
from .optimal import optimal_ranking
from .semiheuristic import semiheuristic_ranking

log = logging.getLogger("amrank")

EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path, parse, *args):
    try:
        return parse(fio.read_text(path), *args)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from exc
    except (ValueError, KeyError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO) from exc


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        fio.write_text(path, text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_IO) from exc


def _fmt(x: float) -> str:
    return repr(float(x))


def _connected_graph(path):
    g = _read(path, load_graph)
    if g.n == 0:
        raise CliError(f"{path}: graph has no vertices", EXIT_INFEASIBLE)
    if not is_connected(g, g.full_mask):
        raise CliError(f"{path}: graph is not connected", EXIT_INFEASIBLE)
    return g


def cmd_generate(args):
    seeds = np.random.SeedSequence(args.seed).spawn(3)
    g = generate_ba_graph(args.n, args.m, seeds[0])
    if not 1 <= args.module_size <= args.n:
        raise CliError("--module-size must be between 1 and --n", EXIT_USAGE)
    module = sample_module(g, args.module_size, seeds[1])
    weights = sample_weights(g.n, module, args.alpha, seeds[2])
    prefix = args.out_prefix
    _write(f"{prefix}graph.tsv", g.to_edge_list_text())
    _write(f"{prefix}weights.tsv", fio.format_vertex_values(g, weights))
    _write(f"{prefix}module.txt", fio.format_vertex_list(g, sorted(module)))
    return 0


def _alpha(args, weights):
    if args.fit_alpha:
        try:
            return fit_bum(weights).alpha
        except ValueError as exc:
            raise CliError(f"cannot fit alpha: {exc}", EXIT_INFEASIBLE) from exc
    if args.alpha is None:
        raise CliError("give --alpha or --fit-alpha", EXIT_USAGE)
    return args.alpha


def cmd_rank(args):
    g = _connected_graph(args.graph)
    weights = _read(args.weights, fio.parse_weights, g)
    alpha = _alpha(args, weights)
    if not 0 < alpha < 1:
        raise CliError("alpha must be in (0, 1)", EXIT_USAGE)
    if args.method == "optimal":
        prior = _read(args.prior, fio.parse_prior, g) if args.prior else None
        try:
            ranking, value = optimal_ranking(g, weights, alpha, prior, cap=args.cap)
        except EnumerationBudgetExceeded as exc:
            raise CliError(f"optimal ranking infeasible for this graph: {exc}",
                           EXIT_INFEASIBLE) from exc
        log.info("expected AUC %.6f", value)
    elif args.method == "semiheuristic":
        ranking = semiheuristic_ranking(g, weights, alpha, args.budget, args.time_limit)
    elif args.method == "bionet":
        ranking = bionet_like_ranking(g, score_vector(weights, alpha),
                                      args.thresholds, args.budget, args.time_limit)
    else:
        ranking = weight_order_ranking(weights)
    _write(args.out, fio.format_vertex_list(g, ranking))
    return 0


def cmd_mwcs(args):
    g = _connected_graph(args.graph)
    scores = _read(args.scores, fio.parse_vertex_values, g, "score")
    if args.anchors is not None and args.candidates is None:
        raise CliError("--anchors needs --candidates", EXIT_USAGE)
    if args.candidates is None:
        sol = solve_mwcs(g, scores, args.budget, args.time_limit)
    else:
        anchors = _read(args.anchors, fio.parse_vertex_list, g) if args.anchors else []
        cands = _read(args.candidates, fio.parse_vertex_list, g)
        try:
            sol = solve_constrained(g, scores, anchors, cands, args.budget, args.time_limit)
        except (MwcsInfeasible, ValueError) as exc:
            raise CliError(str(exc), EXIT_INFEASIBLE) from exc
    labels = ",".join(g.labels[v] for v in sorted(sol.vertices))
    chosen = ",".join(g.labels[v] for v in sorted(sol.chosen))
    out = (f"score={_fmt(sol.total_score)} "
           f"optimal={'true' if sol.proven_optimal else 'false'} "
           f"vertices={labels}")
    if args.candidates is not None:
        out += f" chosen={chosen}"
    print(out)
    return 0


def cmd_fit_bum(args):
    weights = _read(args.weights, fio.parse_weight_column)
    try:
        params = fit_bum(weights)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INFEASIBLE) from exc
    print(f"alpha={_fmt(params.alpha)} lambda={_fmt(params.lam)}")
    return 0


def cmd_evaluate(args):
    g = _read(args.graph, load_graph)
    ranking = _read(args.ranking, fio.parse_vertex_list, g)
    module = _read(args.module, fio.parse_vertex_list, g)
    if sorted(ranking) != list(range(g.n)):
        raise CliError("ranking must list every vertex exactly once", EXIT_IO)
    if not module:
        raise CliError("module file is empty", EXIT_IO)
    value = auc(ranking, module, g.n)
    mono = is_connectivity_monotonous(g, ranking)
    print(f"auc={_fmt(value)} monotonous={'true' if mono else 'false'}")
    return 0


def cmd_experiment(args):
    try:
        cfg = _read(args.config, fio.experiment_config_from_text)
    except TypeError as exc:
        raise CliError(f"{args.config}: {exc}", EXIT_IO) from exc
    graph = None
    if cfg.graph_file:
        graph = _connected_graph(cfg.graph_file)
    results = run_experiment(cfg, args.seed, jobs=args.jobs, graph=graph)
    _write(args.out, results_to_csv(results))
    for method, stats in summarize(results).items():
        log.info("%-18s mean AUC %.4f  median %.4f  (n=%d)", method, stats["mean"],
                 stats["median"], stats["count"])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="amrank", description="Connectivity-monotonous vertex "
                "rankings for active module recovery.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("generate", help="synthetic instance")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, default=1, help="edges per new vertex (default 1)")
    s.add_argument("--module-size", type=int, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-prefix", required=True,
                   help="written: PREFIXgraph.tsv, PREFIXweights.tsv, PREFIXmodule.txt")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("rank", help="rank the vertices of a weighted graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--weights", required=True)
    s.add_argument("--method", required=True,
                   choices=["optimal", "semiheuristic", "bionet", "weight-order"])
    a = s.add_mutually_exclusive_group()
    a.add_argument("--alpha", type=float)
    a.add_argument("--fit-alpha", action="store_true",
                   help="use the alpha of a beta-uniform mixture fit")
    s.add_argument("--prior", help="empirical module prior (optimal method)")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="search nodes per MWCS solve")
    s.add_argument("--time-limit", type=float, default=None,
                   help="wall-clock seconds per MWCS solve")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP,
                   help="maximum number of connected sets (optimal method)")
    s.add_argument("--thresholds", type=int, default=10)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("mwcs", help="maximum-weight connected subgraph")
    s.add_argument("--graph", required=True)
    s.add_argument("--scores", required=True)
    s.add_argument("--anchors")
    s.add_argument("--candidates")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--time-limit", type=float, default=None)
    s.set_defaults(func=cmd_mwcs)

    s = sub.add_parser("fit-bum", help="fit the beta-uniform mixture")
    s.add_argument("--weights", required=True)
    s.set_defaults(func=cmd_fit_bum)

    s = sub.add_parser("evaluate", help="AUC and monotonicity of a ranking")
    s.add_argument("--graph", required=True)
    s.add_argument("--ranking", required=True)
    s.add_argument("--module", required=True)
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("experiment", help="batch of synthetic trials")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="-")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"amrank: error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"amrank: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
