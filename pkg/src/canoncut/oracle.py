"""Exhaustive reference answers for small graphs.

Everything here enumerates candidate sides directly and scores them from
the definitions. None of it shares code paths with the fast search beyond
the :class:`Graph` and :class:`TieBreakConfig` containers and
:meth:`RootedTree.parent`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CapacityError, DomainError
from .graph import CutTuple, Graph, TieBreakConfig, lex_tuple

MAX_ORACLE_N = 20


@dataclass(frozen=True)
class OracleResult:
    side: frozenset
    tuple: CutTuple
    all_min_cuts: list | None = None


@dataclass(frozen=True, eq=False)
class SideTable:
    """Every side avoiding the source, as a bitmask, with its score.

    Bit ``i`` of a mask stands for ``others[i]``.
    """

    others: np.ndarray
    masks: np.ndarray
    value: np.ndarray
    ln: np.ndarray
    priority: np.ndarray

    def side(self, i: int) -> frozenset:
        mask = int(self.masks[i])
        return frozenset(int(v) for b, v in enumerate(self.others) if mask >> b & 1)

    def lex_order(self) -> np.ndarray:
        return np.lexsort((self.priority, self.ln, self.value))

    def member(self, v: int) -> np.ndarray:
        """Boolean column: does each side contain vertex ``v``."""
        pos = int(np.flatnonzero(self.others == v)[0])
        return (self.masks >> pos & 1).astype(bool)


def side_table(g: Graph, cfg: TieBreakConfig) -> SideTable:
    if not 2 <= g.n <= MAX_ORACLE_N:
        raise CapacityError(f"exhaustive search needs 2 <= n <= {MAX_ORACLE_N}, got {g.n}")
    others = np.array([v for v in range(g.n) if v != cfg.s], dtype=np.int64)
    k = len(others)
    masks = np.arange(1, 1 << k, dtype=np.int64)
    inside = np.zeros((g.n, len(masks)), dtype=bool)
    for b, v in enumerate(others):
        inside[v] = (masks >> b) & 1
    value = np.zeros(len(masks), dtype=np.int64)
    for u, v, w in g.edges:
        if w:
            value += w * (inside[u] != inside[v])
    big = np.int64(g.n + 1)
    ln = np.full(len(masks), big, dtype=np.int64)
    pri = np.zeros(len(masks), dtype=np.int64)
    for v in others:
        ln = np.where(inside[v], np.minimum(ln, cfg.h[v]), ln)
        pri += inside[v] * cfg.priority[v]
    return SideTable(others, masks, value, ln, pri)


def oracle_lex_first(g: Graph, cfg: TieBreakConfig, with_all: bool = False) -> OracleResult:
    table = side_table(g, cfg)
    best = int(table.lex_order()[0])
    t = CutTuple(int(table.value[best]), int(table.ln[best]), int(table.priority[best]))
    all_min = None
    if with_all:
        all_min = [table.side(i) for i in np.flatnonzero(table.value == t.value)]
    return OracleResult(table.side(best), t, all_min)


def oracle_check_uniqueness(g: Graph, cfg: TieBreakConfig) -> bool:
    table = side_table(g, cfg)
    best = int(table.lex_order()[0])
    ties = ((table.value == table.value[best]) & (table.ln == table.ln[best])
            & (table.priority == table.priority[best]))
    return int(ties.sum()) == 1


def oracle_min_cut_sides(g: Graph, cfg: TieBreakConfig) -> list[frozenset]:
    """All minimum cuts, each given by its side avoiding the source."""
    table = side_table(g, cfg)
    lam = table.value.min()
    return [table.side(i) for i in np.flatnonzero(table.value == lam)]


def oracle_two_respecting(g: Graph, tree, cfg: TieBreakConfig) -> OracleResult:
    """Best side among those crossed by at most two tree edges."""
    table = side_table(g, cfg)
    inside = {int(v): table.member(v) for v in table.others}
    inside[cfg.s] = np.zeros(len(table.masks), dtype=bool)
    crossed = np.zeros(len(table.masks), dtype=np.int64)
    for v in range(g.n):
        if v != tree.root:
            crossed += inside[v] != inside[int(tree.parent[v])]
    ok = np.flatnonzero(crossed <= 2)
    best = int(ok[np.lexsort((table.priority[ok], table.ln[ok], table.value[ok]))[0]])
    t = CutTuple(int(table.value[best]), int(table.ln[best]), int(table.priority[best]))
    return OracleResult(table.side(best), t)


# --- per-tree candidate families -------------------------------------------

def _down_sets(tree) -> list[frozenset]:
    """``v↓`` for every vertex, found by walking parent pointers."""
    n = len(tree.parent)
    down = [set() for _ in range(n)]
    for x in range(n):
        v = x
        while True:
            down[v].add(x)
            if v == tree.root:
                break
            v = int(tree.parent[v])
    return [frozenset(s) for s in down]


def _best(g, cfg, sides) -> OracleResult | None:
    scored = [(lex_tuple(g, cfg, s), sorted(s, key=lambda v: cfg.h[v]), s) for s in sides]
    if not scored:
        return None
    t, _, side = min(scored, key=lambda r: (r[0], r[1]))
    return OracleResult(side, t)


def oracle_one_respecting(g: Graph, tree, cfg: TieBreakConfig) -> OracleResult:
    down = _down_sets(tree)
    return _best(g, cfg, [down[v] for v in range(g.n) if v != tree.root])


def oracle_best_descendant(g: Graph, tree, u: int, cfg: TieBreakConfig) -> OracleResult | None:
    if u == tree.root:
        raise DomainError("the root has no descendant cuts")
    down = _down_sets(tree)
    return _best(g, cfg, [down[u] - down[v] for v in down[u] if v != u])


def oracle_descendant_min_cuts(g: Graph, tree, u: int) -> list[int]:
    """Every proper descendant ``v`` whose cut ``u↓ \\ v↓`` has minimum value."""
    from .graph import cut_value

    down = _down_sets(tree)
    vals = {v: cut_value(g, down[u] - down[v]) for v in down[u] if v != u}
    if not vals:
        return []
    lo = min(vals.values())
    return sorted(v for v, c in vals.items() if c == lo)


def oracle_best_independent(g: Graph, tree, cfg: TieBreakConfig) -> OracleResult | None:
    down = _down_sets(tree)
    verts = [v for v in range(g.n) if v != tree.root]
    sides = [down[a] | down[b] for a, b in combinations(verts, 2)
             if a not in down[b] and b not in down[a]]
    return _best(g, cfg, sides)


def oracle_all_descendant_best(g: Graph, tree, cfg: TieBreakConfig) -> OracleResult | None:
    """Best descendant cut over every non-root ``u``."""
    results = [oracle_best_descendant(g, tree, u, cfg) for u in range(g.n) if u != tree.root]
    results = [r for r in results if r is not None]
    if not results:
        return None
    return min(results, key=lambda r: (r.tuple, sorted(r.side, key=lambda v: cfg.h[v])))
