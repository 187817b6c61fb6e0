"""``canoncut`` command line: solve, oracle, verify, meta, bench.

Exit codes: 0 success, 1 threshold violation, 2 input or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .bench import INDEPENDENT_CAP, bench_tsv, loglog_slope, run_bench
from .contraction import (CutQueryOracle, exact_nmc_provider, identity_provider,
                          karger_providers, meta_select, min_degree_vertex)
from .errors import CanonCutError, ConfigError
from .graph import TieBreakConfig, cut_json, read_graph, side_sort_key
from .oracle import oracle_check_uniqueness, oracle_lex_first
from .packing import PackingParams
from .respecting import ENGINES
from .solver import SolveParams, canonical_min_cut

log = logging.getLogger("canoncut")

EXIT_OK, EXIT_THRESHOLD, EXIT_INPUT = 0, 1, 2


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _config(g, source):
    if source is None:
        return TieBreakConfig.default(g.n)
    if not 0 <= source < g.n:
        raise ConfigError(f"--source {source} is not a vertex of the graph")
    return TieBreakConfig.with_source(g.n, source)


def _params(args) -> SolveParams:
    return SolveParams(seed=args.seed, amplify=args.amplify,
                       packing=PackingParams(trees_c=args.trees_c),
                       engine=args.independent_engine)


def _emit(cfg, side, t, fmt, extra=None):
    if fmt == "json":
        line = cut_json(cfg, side, t)
        if extra:
            payload = json.loads(line)
            payload.update(extra)
            line = json.dumps(payload, separators=(",", ":"))
        print(line)
    else:
        head = ["value", "ln", "priority", "side"] + list(extra or {})
        row = [str(t.value), str(t.ln), str(t.priority),
               ",".join(str(v) for v in side_sort_key(cfg, side))]
        row += [json.dumps(v) for v in (extra or {}).values()]
        print("\t".join(head))
        print("\t".join(row))


def cmd_solve(args) -> int:
    g = read_graph(args.file)
    cfg = _config(g, args.source)
    res = canonical_min_cut(g, cfg, _params(args))
    _emit(cfg, res.side, res.tuple, args.format)
    if args.diagnostics:
        print(json.dumps(res.diagnostics, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = read_graph(args.file)
    cfg = _config(g, args.source)
    res = oracle_lex_first(g, cfg)
    extra = {"unique": oracle_check_uniqueness(g, cfg)} if args.check_unique else None
    _emit(cfg, res.side, res.tuple, args.format, extra)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import bundled_corpus, load_corpus, verify_graphs

    limits = {"match": args.min_match, "unique": args.min_unique, "one_respecting": args.min_case,
              "descendant": args.min_case, "independent": args.min_case,
              "two_respecting": args.min_case}
    for name, value in limits.items():
        if not 0.0 <= value <= 1.0:
            raise ConfigError(f"threshold for {name} must lie in [0, 1], got {value}")
    graphs = load_corpus(args.corpus) if args.corpus else bundled_corpus()
    rep = verify_graphs(graphs, args.trials, args.seed, args.amplify, args.independent_engine)
    rates = rep.rates()
    print("metric\tvalue")
    print(f"graphs\t{rep.graphs}")
    print(f"skipped\t{rep.skipped}")
    print(f"runs\t{rep.runs}")
    print(f"mismatches\t{rep.mismatches}")
    for name, rate in rates.items():
        print(f"{name}_rate\t{rate:.6f}")
    if args.plot:
        from .plotting import plot_verify
        plot_verify(rates, args.plot)
    failed = [k for k, lim in limits.items() if rates[k] < lim]
    for k in failed:
        log.error("%s rate %.4f below threshold %.4f", k, rates[k], limits[k])
    return EXIT_THRESHOLD if failed else EXIT_OK


def cmd_meta(args) -> int:
    g = read_graph(args.file)
    cfg = _config(g, args.source)
    oracle = CutQueryOracle(g)
    v = min_degree_vertex(oracle, cfg) if g.n >= 2 else None
    if args.provider == "exact":
        sparsifiers = [exact_nmc_provider(g, cfg)]
    elif g.n < 4:
        log.warning("n=%d is too small to halve; using the identity contraction", g.n)
        sparsifiers = [identity_provider(g, cfg)]
    else:
        sparsifiers = karger_providers(g, args.providers, args.seed, cfg)
    res = meta_select(g, sparsifiers, v, cfg, _params(args), oracle)
    extra = {"queries": oracle.queries} if args.report_queries else None
    _emit(cfg, res.side, res.tuple, args.format, extra)
    if args.diagnostics:
        print(json.dumps(res.diagnostics, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = args.sizes
    if any(b < a for a, b in zip(sizes, sizes[1:])):
        raise ConfigError("bench sizes must be ascending")
    if any(n < 2 for n in sizes):
        raise ConfigError("bench sizes must be at least 2")
    rows = run_bench(sizes, args.seed, density=args.density,
                     params=PackingParams(trees_c=args.trees_c),
                     engine=args.independent_engine, independent_cap=args.independent_cap)
    sys.stdout.write(bench_tsv(rows))
    if len(rows) >= 2:
        slope = loglog_slope([r.m for r in rows], [r.core for r in rows])
        print(f"core log-log slope vs m: {slope:.3f}", file=sys.stderr)
    if args.plot:
        from .plotting import plot_bench
        plot_bench(rows, args.plot)
    return EXIT_OK


def _solver_flags(p, seed=True):
    if seed:
        p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--amplify", type=_positive_int, default=8,
                   help="independent packings whose candidates are pooled")
    p.add_argument("--trees-c", type=_positive_float, default=3.0,
                   help="trees per packing = ceil(c ln n)")
    p.add_argument("--independent-engine", choices=ENGINES, default="quadratic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="canoncut", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="canonical minimum cut of a graph file")
    p.add_argument("file")
    _solver_flags(p)
    p.add_argument("--source", type=int, default=None, help="source vertex (default n-1)")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--diagnostics", action="store_true", help="diagnostics JSON on stderr")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force lexicographically first minimum cut")
    p.add_argument("file")
    p.add_argument("--source", type=int, default=None)
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--check-unique", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="solver vs oracle over a corpus")
    p.add_argument("corpus", nargs="?", default=None,
                   help="directory of graph files (default: bundled corpus)")
    p.add_argument("--trials", type=_positive_int, default=3)
    _solver_flags(p)
    p.add_argument("--min-match", type=float, default=0.998)
    p.add_argument("--min-unique", type=float, default=1.0)
    p.add_argument("--min-case", type=float, default=1.0)
    p.add_argument("--plot", default=None, help="write a rate figure to this path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("meta", help="candidate selection over contractions")
    p.add_argument("file")
    _solver_flags(p)
    p.add_argument("--source", type=int, default=None)
    p.add_argument("--providers", type=_positive_int, default=8)
    p.add_argument("--provider", choices=("exact", "karger-half"), default="karger-half")
    p.add_argument("--report-queries", action="store_true")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--diagnostics", action="store_true")
    p.set_defaults(func=cmd_meta)

    p = sub.add_parser("bench", help="stage timings on random sparse graphs")
    p.add_argument("sizes", nargs="*", type=int)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--density", type=_positive_int, default=8, help="m is about density * n")
    p.add_argument("--trees-c", type=_positive_float, default=3.0)
    p.add_argument("--independent-engine", choices=ENGINES, default="quadratic")
    p.add_argument("--independent-cap", type=_nonneg_int, default=INDEPENDENT_CAP,
                   help="skip the independent stage above this n")
    p.add_argument("--plot", default=None, help="write a log-log figure to this path")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (CanonCutError, OSError) as exc:
        print(f"canoncut: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
