"""Contractions, inherited tie-breaking labels and candidate selection.

A contraction merges each class ``C_u`` of a vertex partition into one
super-vertex ``u`` with

* ``P(u) = sum of P over C_u``,
* ``h(u) = min of h over C_u``,
* source = the class holding the original source.

Scores of a contracted side then equal the scores of its expansion in the
original graph. Contracted graphs are solved with the order-preserving
ranks of the inherited ``h`` values, so the usual bijective config applies.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError, InvalidCutError, StructureError
from .graph import (CutTuple, Graph, TieBreakConfig, cut_value, lex_tuple, normalize_side,
                    side_sort_key)
from .oracle import MAX_ORACLE_N, oracle_min_cut_sides
from .packing import derive_seed
from .solver import SolveParams, SolveResult, canonical_min_cut


@dataclass(frozen=True, eq=False)
class Contraction:
    base: Graph
    base_cfg: TieBreakConfig
    label: np.ndarray          # super-vertex of each base vertex
    groups: list               # members of each super-vertex
    contracted: Graph
    cfg: TieBreakConfig        # ranked h, summed P, source class
    h_inherited: np.ndarray    # raw min-h per super-vertex (0 at the source)

    @property
    def n(self) -> int:
        return self.contracted.n

    def expand(self, side_h) -> frozenset:
        out = set()
        for u in side_h:
            out |= self.groups[u]
        return frozenset(out)


def contract(g: Graph, groups, cfg: TieBreakConfig | None = None) -> Contraction:
    """Contract ``groups`` (a partition of the vertices, given as a list of
    vertex collections or as a per-vertex label array)."""
    cfg = cfg or TieBreakConfig.default(g.n)
    if isinstance(groups, np.ndarray) and groups.ndim == 1 and len(groups) == g.n:
        raw = {}
        for v, lab in enumerate(groups.tolist()):
            raw.setdefault(lab, set()).add(v)
        classes = list(raw.values())
    else:
        classes = [set(int(x) for x in c) for c in groups]
    seen = [x for c in classes for x in c]
    if any(not c for c in classes) or sorted(seen) != list(range(g.n)):
        raise StructureError("groups must partition the vertex set")
    classes.sort(key=min)
    label = np.empty(g.n, dtype=np.int64)
    for i, c in enumerate(classes):
        label[list(c)] = i
    k = len(classes)

    a, b = label[g.src], label[g.dst]
    keep = a != b
    lo, hi = np.minimum(a[keep], b[keep]), np.maximum(a[keep], b[keep])
    key = lo * k + hi
    uniq, inv = np.unique(key, return_inverse=True)
    w = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(w, inv, g.weight[keep])
    contracted = Graph(k, uniq // k, uniq % k, w)

    s_h = int(label[cfg.s])
    h_raw = np.zeros(k, dtype=np.int64)
    pri = np.zeros(k, dtype=np.int64)
    np.add.at(pri, label, cfg.priority)
    for i, c in enumerate(classes):
        if i != s_h:
            h_raw[i] = min(int(cfg.h[x]) for x in c)
    ranked = np.zeros(k, dtype=np.int64)
    others = [i for i in range(k) if i != s_h]
    for r, i in enumerate(sorted(others, key=lambda i: h_raw[i]), 1):
        ranked[i] = r
    h_cfg = TieBreakConfig(s_h, ranked, pri)
    return Contraction(g, cfg, label, [frozenset(c) for c in classes], contracted, h_cfg, h_raw)


def contracted_tuple(c: Contraction, side_h) -> CutTuple:
    """Score of a contracted side under the inherited (raw) labels."""
    side = frozenset(int(u) for u in side_h)
    if not side or len(side) >= c.n or min(side) < 0 or max(side) >= c.n:
        raise InvalidCutError("not a cut of the contracted graph")
    far = side if c.cfg.s not in side else frozenset(range(c.n)) - side
    return CutTuple(cut_value(c.contracted, side), int(min(c.h_inherited[u] for u in far)),
                    int(sum(int(c.cfg.priority[u]) for u in far)))


def tuple_consistency_check(c: Contraction, side_h) -> bool:
    return contracted_tuple(c, side_h) == lex_tuple(c.base, c.base_cfg, c.expand(side_h))


class CutQueryOracle:
    """Hidden graph answering cut-value queries, with a query counter."""

    def __init__(self, g: Graph):
        self._g = g
        self._lock = threading.Lock()
        self.queries = 0

    @property
    def n(self) -> int:
        return self._g.n

    def query(self, side) -> int:
        value = cut_value(self._g, side)
        with self._lock:
            self.queries += 1
        return value

    def query_contracted(self, c: Contraction, side_h) -> int:
        """Cut value of a contracted side, paid for with one base query."""
        return self.query(c.expand(side_h))


def cut_query(oracle: CutQueryOracle, side) -> int:
    return oracle.query(side)


def singleton_tuple(cfg: TieBreakConfig, v: int, degree: int) -> CutTuple:
    """Score of the cut ``{v}`` given its weighted degree."""
    if v != cfg.s:
        return CutTuple(int(degree), int(cfg.h[v]), int(cfg.priority[v]))
    others = np.arange(cfg.n) != v
    return CutTuple(int(degree), int(cfg.h[others].min()), int(cfg.priority[others].sum()))


def min_degree_vertex(g_or_oracle, cfg: TieBreakConfig) -> int:
    """Vertex whose singleton cut scores best among the minimum-degree ones.

    The source counts too: its singleton is the cut ``V \\ {s}``.
    Through a :class:`CutQueryOracle` this costs exactly ``n`` queries.
    """
    n = g_or_oracle.n
    if n < 2:
        raise DomainError("need at least two vertices")
    if isinstance(g_or_oracle, CutQueryOracle):
        deg = [g_or_oracle.query([v]) for v in range(n)]
    else:
        deg = g_or_oracle.degrees.tolist()
    return min(range(n), key=lambda v: singleton_tuple(cfg, v, deg[v]))


def identity_provider(g: Graph, cfg: TieBreakConfig) -> Contraction:
    return contract(g, [[v] for v in range(g.n)], cfg)


def exact_nmc_provider(g: Graph, cfg: TieBreakConfig) -> Contraction:
    """Contract every edge that no non-trivial minimum cut separates.

    Brute force, so limited to small graphs. Graphs whose minimum cuts are
    all trivial collapse completely; the caller's trivial candidate covers
    them.
    """
    if g.n > MAX_ORACLE_N:
        raise CapacityError(f"exact sparsifier needs n <= {MAX_ORACLE_N}")
    cuts = [s for s in oracle_min_cut_sides(g, cfg) if 1 < len(s) < g.n - 1]
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in g.edges:
        if all((u in s) == (v in s) for s in cuts):
            parent[find(u)] = find(v)
    return contract(g, np.array([find(v) for v in range(g.n)]), cfg)


def karger_half_provider(g: Graph, seed: int, cfg: TieBreakConfig | None = None) -> Contraction:
    """Random weighted edge contraction down to ``ceil(n/2)`` super-vertices.

    Contracting in order of exponential clocks with rate ``w`` picks each
    next edge with probability proportional to its weight among the edges
    still joining different classes.
    """
    if g.n < 4:
        raise DomainError("karger-half contraction needs n >= 4")
    rng = np.random.default_rng(seed)
    target = math.ceil(g.n / 2)
    with np.errstate(divide="ignore"):
        clocks = rng.exponential(size=g.m) / np.where(g.weight > 0, g.weight, 0)
    order = np.argsort(clocks, kind="stable")
    parent = list(range(g.n))
    classes = g.n

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in order.tolist():
        if classes <= target or g.weight[i] == 0:
            break
        ru, rv = find(int(g.src[i])), find(int(g.dst[i]))
        if ru != rv:
            parent[ru] = rv
            classes -= 1
    return contract(g, np.array([find(v) for v in range(g.n)]), cfg)


def meta_select(g: Graph, sparsifiers, min_deg_vertex: int | None, cfg: TieBreakConfig,
                params: SolveParams | None = None,
                oracle: CutQueryOracle | None = None) -> SolveResult:
    """Best of the trivial candidate ``{min_deg_vertex}`` and the expanded
    canonical cut of every contraction.

    With ``oracle`` the candidates' base values are read through cut
    queries, one per candidate.
    """
    params = params or SolveParams()

    def score(side):
        if oracle is None:
            return lex_tuple(g, cfg, side)
        t = lex_tuple(g, cfg, side)
        return CutTuple(oracle.query(side), t.ln, t.priority)

    candidates = []
    if min_deg_vertex is not None:
        side = normalize_side(cfg, [int(min_deg_vertex)])
        candidates.append((score(side), side, "trivial"))
    for i, c in enumerate(sparsifiers):
        if c.n < 2:
            continue
        res = canonical_min_cut(c.contracted, c.cfg, params)
        side = c.expand(res.side)
        candidates.append((score(side), side, f"sparsifier:{i}"))
    if not candidates:
        raise DomainError("no candidate cuts: empty sparsifier list and no trivial vertex")
    t, side, source = min(candidates, key=lambda r: (r[0], side_sort_key(cfg, r[1])))
    kappa = max((c.contracted.m for c in sparsifiers), default=0)
    return SolveResult(side, t, {"source": source, "candidates": len(candidates),
                                 "kappa": kappa})


def karger_providers(g: Graph, k: int, seed: int, cfg: TieBreakConfig | None = None,
                     threads: int = 0) -> list[Contraction]:
    """``k`` independent karger-half contractions with derived seeds, in
    seed order whatever the thread count."""
    seeds = [derive_seed(seed, i) for i in range(k)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda s: karger_half_provider(g, s, cfg), seeds))
    return [karger_half_provider(g, s, cfg) for s in seeds]
