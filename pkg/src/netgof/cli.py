"""Command-line interface.

Payloads (test results, exact distributions, generated edge lists,
experiment rows) go to stdout; prose, warnings, and progress go to
stderr.  Exit codes: 0 success, 1 bad flags or infeasible parameters,
2 unreadable or malformed input data.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import experiments
from .errors import (CalibrationError, EnumerationGuardError, NetgofError,
                     ParameterError, ParseError)
from .gof import (approximation_test, empirical_test,
                  exact_edge_count_distribution, _resolve_seed)
from .graph import (generate_gnm, generate_gnp, generate_two_colour,
                    parse_edge_list, write_edge_list)

log = logging.getLogger(__name__)

_USAGE_EXIT = 1
_DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2
    # for data errors, so route usage failures to exit code 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_USAGE_EXIT, f"{self.prog}: error: {message}\n")


class _LiveStderrHandler(logging.Handler):
    # resolve sys.stderr at emit time so redirected streams are honoured
    def emit(self, record):
        try:
            sys.stderr.write(self.format(record) + "\n")
        except Exception:
            self.handleError(record)


_logging_ready = False


def _ensure_logging():
    global _logging_ready
    if _logging_ready:
        return
    handler = _LiveStderrHandler()
    handler.setFormatter(logging.Formatter("%(message)s"))
    root = logging.getLogger()
    root.addHandler(handler)
    if root.level > logging.INFO or root.level == logging.NOTSET:
        root.setLevel(logging.INFO)
    _logging_ready = True


def _csv_list(cast, label):
    def parse(text: str):
        try:
            return tuple(cast(tok) for tok in text.split(",") if tok.strip())
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"expected a comma-separated list of {label}: {text!r}")
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="netgof",
        description="Test a network for homogeneous edge probability by "
                    "sampling induced subgraphs and comparing edge counts "
                    "against the hypergeometric null.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser(
        "test", help="run a homogeneity test on an edge-list file")
    p_test.add_argument("file", help="edge-list file (two tokens per line, "
                                     "'#' comments allowed)")
    p_test.add_argument("--method", choices=("approx", "empirical"),
                        default="approx", help="p-value computation "
                        "(default: approx)")
    p_test.add_argument("--k", type=int, default=None,
                        help="subgraph size (default: variance-optimal)")
    p_test.add_argument("--n", type=int, default=1000,
                        help="number of sampled subgraphs (default: 1000)")
    p_test.add_argument("--r", type=int, default=200,
                        help="null replicates for --method empirical "
                             "(default: 200)")
    p_test.add_argument("--seed", type=int, default=None)
    p_test.add_argument("--nodes", type=int, default=None,
                        help="declare the node count (for isolated "
                             "trailing nodes)")
    p_test.set_defaults(func=cmd_test)

    p_gen = sub.add_parser("gen", help="generate a random graph")
    p_gen.add_argument("model", choices=("gnm", "gnp", "two-colour"))
    p_gen.add_argument("--nodes", type=int, required=True)
    p_gen.add_argument("--edges", type=int, default=None,
                       help="edge count (gnm)")
    p_gen.add_argument("--p", type=float, default=None,
                       help="edge probability (gnp)")
    p_gen.add_argument("--mean-degree", type=float, default=None,
                       help="target mean degree (two-colour)")
    p_gen.add_argument("--ratio", type=float, default=None,
                       help="heterogeneity ratio (q-p)/(p+q) (two-colour)")
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--out", default=None,
                       help="output file (default: stdout)")
    p_gen.set_defaults(func=cmd_gen)

    p_exact = sub.add_parser(
        "exact-dist", help="exact subgraph edge-count distribution by "
                           "enumeration (small graphs)")
    p_exact.add_argument("file")
    p_exact.add_argument("--k", type=int, required=True,
                         help="subgraph size")
    p_exact.add_argument("--nodes", type=int, default=None)
    p_exact.set_defaults(func=cmd_exact_dist)

    p_exp = sub.add_parser(
        "experiment", help="significance / power / timing sweeps")
    p_exp.add_argument("kind", choices=("significance", "power", "timing"))
    p_exp.add_argument("--sizes", type=_csv_list(int, "integers"),
                       default=None, help="comma-separated network sizes")
    p_exp.add_argument("--degrees", type=_csv_list(float, "numbers"),
                       default=None, help="comma-separated mean degrees")
    p_exp.add_argument("--ratios", type=_csv_list(float, "numbers"),
                       default=None,
                       help="comma-separated ratios (power only)")
    p_exp.add_argument("--reps", type=int, default=None,
                       help="replications per cell")
    p_exp.add_argument("--method", choices=("approx", "empirical"),
                       default="approx")
    p_exp.add_argument("--n", type=int, default=1000,
                       help="subgraphs per test (default: 1000)")
    p_exp.add_argument("--replicates", type=int, default=200,
                       help="null replicates inside each empirical test "
                            "(default: 200)")
    p_exp.add_argument("--alpha", type=float, default=0.05)
    p_exp.add_argument("--seed", type=int, default=None)
    p_exp.add_argument("--threads", type=int, default=None,
                       help="worker processes (default: NETGOF_THREADS "
                            "or 1)")
    p_exp.add_argument("--paper-scale", action="store_true",
                       help="full-size grids and replication counts "
                            "(hours of compute)")
    p_exp.add_argument("--out", default=None,
                       help="basename for <out>.csv and <out>.json")
    p_exp.set_defaults(func=cmd_experiment)
    return parser


def _load_graph(path: str, node_count):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh, node_count=node_count)


def _full_method(flag: str) -> str:
    return "empirical" if flag == "empirical" else "approximation"


def cmd_test(args) -> int:
    g = _load_graph(args.file, args.nodes)
    method = _full_method(args.method)
    if method == "empirical":
        result = empirical_test(g, k=args.k, n_subgraphs=args.n,
                                replicates=args.r, seed=args.seed)
    else:
        result = approximation_test(g, k=args.k, n_subgraphs=args.n,
                                    seed=args.seed)
    print(json.dumps(result.to_dict()))
    log.info("%s test on |V|=%d, |E|=%d: X2=%.6g, df=%d, p=%.6g "
             "(N=%d subgraphs of k=%d, seed=%d)", method, g.node_count,
             g.edge_count, result.statistic, result.df, result.p_value,
             result.n_subgraphs, result.subgraph_size, result.seed)
    if result.degenerate:
        log.warning("degenerate result: the null puts all its usable mass "
                    "in one bin, so the statistic carries no information "
                    "and p=1 by convention")
    elif result.bin_count <= 2:
        log.warning("only %d bins (small N or narrow null support); the "
                    "chi-square approximation is weak here",
                    result.bin_count)
    return 0


def cmd_gen(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.model == "gnm":
        if args.edges is None:
            raise ParameterError("gnm requires --edges")
        g = generate_gnm(args.nodes, args.edges, seed)
    elif args.model == "gnp":
        if args.p is None:
            raise ParameterError("gnp requires --p")
        g = generate_gnp(args.nodes, args.p, seed)
    else:
        if args.mean_degree is None or args.ratio is None:
            raise ParameterError("two-colour requires --mean-degree "
                                 "and --ratio")
        params = experiments.calibrate_two_colour(args.nodes,
                                                  args.mean_degree,
                                                  args.ratio)
        g = generate_two_colour(params, seed)
        log.info("calibrated two-colour model: p=%.8g, q=%.8g "
                 "(q-p=%.8g), cross=%.8g", params.p, params.q,
                 params.q - params.p, params.cross)
    if args.out is None:
        write_edge_list(g, sys.stdout)
    else:
        write_edge_list(g, args.out)
    log.info("generated %s graph: |V|=%d, |E|=%d (seed=%d)%s",
             args.model, g.node_count, g.edge_count, seed,
             f" -> {args.out}" if args.out else "")
    return 0


def cmd_exact_dist(args) -> int:
    g = _load_graph(args.file, args.nodes)
    dist = exact_edge_count_distribution(g, args.k)
    print(json.dumps({str(y): p for y, p in dist.items()}))
    log.info("exact edge-count distribution for k=%d over |V|=%d, |E|=%d",
             args.k, g.node_count, g.edge_count)
    return 0


def _resolve_threads(flag_value) -> int:
    if flag_value is not None:
        return flag_value
    raw = os.environ.get("NETGOF_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return int(raw)
    except ValueError:
        raise ParameterError(f"NETGOF_THREADS must be an integer, "
                             f"got {raw!r}")


def cmd_experiment(args) -> int:
    method = _full_method(args.method)
    kind = args.kind
    sizes = args.sizes if args.sizes is not None else \
        experiments.default_sizes(kind, args.paper_scale)
    degrees = args.degrees if args.degrees is not None else \
        experiments.default_degrees(kind, args.paper_scale)
    ratios = args.ratios if args.ratios is not None else \
        (experiments.default_ratios(args.paper_scale)
         if kind == "power" else ())
    reps = args.reps if args.reps is not None else \
        experiments.default_replications(kind, method, args.paper_scale)
    seed = _resolve_seed(args.seed)
    config = experiments.ExperimentConfig(
        sizes=sizes, mean_degrees=degrees, ratios=ratios,
        replications=reps, n_subgraphs=args.n, replicates=args.replicates,
        alpha=args.alpha, method=method, base_seed=seed,
        threads=_resolve_threads(args.threads))
    log.info("%s study: %d sizes x %d degrees%s, %d reps per cell, "
             "method=%s, base seed=%d", kind, len(config.sizes),
             len(config.mean_degrees),
             f" x {len(config.ratios)} ratios" if kind == "power" else "",
             config.replications, config.method, config.base_seed)
    runner = {"significance": experiments.run_significance,
              "power": experiments.run_power,
              "timing": experiments.run_timing}[kind]
    rows = runner(config)
    print(json.dumps(experiments.rows_to_dicts(rows), indent=2))
    if args.out:
        experiments.rows_to_csv(rows, args.out + ".csv")
        experiments.rows_to_json(rows, args.out + ".json")
        log.info("wrote %s.csv and %s.json", args.out, args.out)
    return 0


def main(argv=None) -> int:
    _ensure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, EnumerationGuardError) as exc:
        log.error("error: %s", exc)
        return _DATA_EXIT
    except OSError as exc:
        log.error("error: %s", exc)
        return _DATA_EXIT
    except (ParameterError, CalibrationError) as exc:
        log.error("error: %s", exc)
        return _USAGE_EXIT
    except NetgofError as exc:
        log.error("error: %s", exc)
        return _USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
