"""Differential verification of the solver against brute force."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .generators import random_spanning_tree
from .graph import Graph, TieBreakConfig, read_graph, parse_graph
from .oracle import (MAX_ORACLE_N, oracle_all_descendant_best, oracle_best_independent,
                     oracle_check_uniqueness, oracle_lex_first, oracle_one_respecting,
                     oracle_two_respecting)
from .packing import derive_seed
from .respecting import (best_one_respecting, best_two_respecting, descendant_search,
                         independent_search, TreeContext)
from .solver import SolveParams, canonical_min_cut
from .trees import build_rooted

log = logging.getLogger(__name__)

CASES = ("one_respecting", "descendant", "independent", "two_respecting")


@dataclass
class VerifyReport:
    graphs: int = 0
    skipped: int = 0
    runs: int = 0
    mismatches: int = 0
    unique: int = 0
    case_runs: int = 0
    case_equal: dict = field(default_factory=lambda: dict.fromkeys(CASES, 0))

    def rates(self) -> dict:
        out = {"match": 1 - self.mismatches / self.runs if self.runs else 1.0,
               "unique": self.unique / self.graphs if self.graphs else 1.0}
        for c in CASES:
            out[c] = self.case_equal[c] / self.case_runs if self.case_runs else 1.0
        return out


def bundled_corpus() -> list[tuple[str, Graph]]:
    root = resources.files("canoncut") / "data" / "corpus"
    return sorted((p.name, parse_graph(p.read_text(encoding="utf-8")))
                  for p in root.iterdir() if p.name.endswith(".graph"))


def load_corpus(path) -> list[tuple[str, Graph]]:
    files = sorted(p for p in Path(path).iterdir() if p.is_file() and not p.name.startswith("."))
    return [(p.name, read_graph(p)) for p in files]


def _same(res, oracle, tree) -> bool:
    if res is None or oracle is None:
        return res is None and oracle is None
    return res.tuple == oracle.tuple and res.side(tree) == oracle.side


def verify_graphs(graphs, trials: int = 3, seed: int = 0, amplify: int = 8,
                  engine: str = "quadratic") -> VerifyReport:
    """Solver vs oracle for every graph and trial seed, plus the per-case
    searches on one random spanning tree per trial."""
    rep = VerifyReport()
    for gi, (name, g) in enumerate(graphs):
        if g.n > MAX_ORACLE_N:
            log.warning("skipping %s: n=%d exceeds the oracle limit %d", name, g.n, MAX_ORACLE_N)
            rep.skipped += 1
            continue
        if g.n < 2:
            log.warning("skipping %s: fewer than two vertices", name)
            rep.skipped += 1
            continue
        cfg = TieBreakConfig.default(g.n)
        rep.graphs += 1
        rep.unique += oracle_check_uniqueness(g, cfg)
        expect = oracle_lex_first(g, cfg)
        for t in range(trials):
            s = derive_seed(seed, gi * max(trials, 1) + t)
            res = canonical_min_cut(g, cfg, SolveParams(seed=s, amplify=amplify, engine=engine))
            rep.runs += 1
            rep.mismatches += res.side != expect.side or res.tuple != expect.tuple
            if not g.is_connected():
                continue
            tree = build_rooted(g, random_spanning_tree(np.random.default_rng(s), g), cfg.s)
            ctx = TreeContext(g, tree, cfg)
            rep.case_runs += 1
            eq = rep.case_equal
            eq["one_respecting"] += _same(best_one_respecting(g, tree, cfg, ctx),
                                          oracle_one_respecting(g, tree, cfg), tree)
            eq["descendant"] += _same(descendant_search(g, tree, cfg, ctx),
                                      oracle_all_descendant_best(g, tree, cfg), tree)
            eq["independent"] += _same(independent_search(g, tree, cfg, engine, ctx),
                                       oracle_best_independent(g, tree, cfg), tree)
            eq["two_respecting"] += _same(best_two_respecting(g, tree, cfg, engine, ctx),
                                          oracle_two_respecting(g, tree, cfg), tree)
    return rep
