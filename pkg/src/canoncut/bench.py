"""Stage timings of the solver on random sparse graphs."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .generators import random_sparse_graph
from .graph import TieBreakConfig
from .packing import PackingParams, derive_seed, pack_trees
from .respecting import (TreeContext, best_one_respecting, descendant_search,
                         independent_search)

STAGES = ("packing", "one_respecting", "descendant", "independent")
INDEPENDENT_CAP = 2048


@dataclass
class BenchRow:
    n: int
    m: int
    trees: int
    packing: float
    one_respecting: float
    descendant: float
    independent: float | None  # None when skipped above the cap

    @property
    def core(self) -> float:
        """Stages with near-linear cost (everything but the independent case)."""
        return self.packing + self.one_respecting + self.descendant


def bench_size(n: int, seed: int, density: int = 8, params: PackingParams | None = None,
               engine: str = "quadratic", independent_cap: int = INDEPENDENT_CAP) -> BenchRow:
    rng = np.random.default_rng(seed)
    g = random_sparse_graph(rng, n, density * n)
    cfg = TieBreakConfig.default(n)

    clock = time.perf_counter()
    trees = pack_trees(g, cfg, seed, params).trees
    packing = time.perf_counter() - clock
    one = desc = ind = 0.0
    for tree in trees:
        ctx = TreeContext(g, tree, cfg)
        clock = time.perf_counter()
        best_one_respecting(g, tree, cfg, ctx)
        mid = time.perf_counter()
        descendant_search(g, tree, cfg, ctx)
        end = time.perf_counter()
        one += mid - clock
        desc += end - mid
        if n <= independent_cap:
            independent_search(g, tree, cfg, engine, ctx)
            ind += time.perf_counter() - end
    return BenchRow(n, g.m, len(trees), packing, one, desc, ind if n <= independent_cap else None)


def run_bench(sizes, seed: int = 0, **kw) -> list[BenchRow]:
    if len(sizes):
        bench_size(64, seed, **kw)  # compile and warm caches before timing
    return [bench_size(int(n), derive_seed(seed, i), **kw) for i, n in enumerate(sizes)]


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    if len(xs) < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


def bench_tsv(rows) -> str:
    lines = ["n\tm\ttrees\t" + "\t".join(STAGES) + "\tcore"]
    for r in rows:
        ind = "skipped" if r.independent is None else f"{r.independent:.6f}"
        lines.append(f"{r.n}\t{r.m}\t{r.trees}\t{r.packing:.6f}\t{r.one_respecting:.6f}\t"
                     f"{r.descendant:.6f}\t{ind}\t{r.core:.6f}")
    return "\n".join(lines) + "\n"
