"""Canonical minimum cut: tree packings plus per-tree 2-respecting search."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .graph import CutTuple, Graph, TieBreakConfig, lex_tuple, side_sort_key
from .packing import PackingParams, derive_seed, pack_trees
from .respecting import ENGINES, TreeContext, best_two_respecting, pick_best


@dataclass(frozen=True)
class SolveParams:
    seed: int = 0
    amplify: int = 8
    packing: PackingParams = field(default_factory=PackingParams)
    engine: str = "quadratic"
    threads: int | None = None  # None reads CANONCUT_THREADS

    def __post_init__(self):
        if self.amplify < 1:
            raise ConfigError("amplify must be at least 1")
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown independent engine {self.engine!r}")
        if self.packing.trees_c <= 0:
            raise ConfigError("trees_c must be positive")


@dataclass
class SolveResult:
    side: frozenset
    tuple: CutTuple
    diagnostics: dict = field(default_factory=dict)


def _threads(params: SolveParams) -> int:
    if params.threads is not None:
        return params.threads
    raw = os.environ.get("CANONCUT_THREADS", "0")
    try:
        return max(0, int(raw))
    except ValueError:
        raise ConfigError(f"CANONCUT_THREADS must be an integer, got {raw!r}") from None


def components_fallback(g: Graph, cfg: TieBreakConfig) -> SolveResult:
    """Zero-value cut: the component avoiding ``s`` that holds the smallest ``h``."""
    labels = g.positive_components()
    if labels.max() == 0:
        raise DomainError("graph is connected")
    src_label = labels[cfg.s]
    h = cfg.h.copy()
    h[labels == src_label] = cfg.n + 1
    first = int(np.argmin(h))
    side = frozenset(np.flatnonzero(labels == labels[first]).tolist())
    t = lex_tuple(g, cfg, side)
    return SolveResult(side, t, {"case": "components"})


def canonical_min_cut(g: Graph, cfg: TieBreakConfig | None = None,
                      params: SolveParams | None = None) -> SolveResult:
    cfg = cfg or TieBreakConfig.default(g.n)
    params = params or SolveParams()
    if g.n < 2:
        raise DomainError("need at least two vertices")
    start = time.perf_counter()
    if not g.is_connected():
        res = components_fallback(g, cfg)
        res.diagnostics["wall_time"] = time.perf_counter() - start
        return res

    trees, seen = [], set()
    for i in range(params.amplify):
        for t in pack_trees(g, cfg, derive_seed(params.seed, i), params.packing).trees:
            if t.key() not in seen:
                seen.add(t.key())
                trees.append(t)

    def search(tree):
        return best_two_respecting(g, tree, cfg, params.engine, TreeContext(g, tree, cfg))

    workers = _threads(params)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(search, trees))
    else:
        results = [search(t) for t in trees]
    owner = {id(r): t for r, t in zip(results, trees)}
    best = pick_best(results, lambda r: owner[id(r)], cfg)
    side = best.side(owner[id(best)])
    return SolveResult(side, best.tuple, {
        "trees": len(trees),
        "case": best.case,
        "wall_time": time.perf_counter() - start,
    })


def result_key(cfg: TieBreakConfig, res: SolveResult):
    return res.tuple, side_sort_key(cfg, res.side)
