"""Lexicographically-first cut that 2-respects a fixed spanning tree.

A side crossed by at most two tree edges is one of

* ``v↓``              (one tree edge crossed),
* ``u↓ \\ v↓``        for a proper descendant ``v`` of ``u``,
* ``u↓ ∪ v↓``         for ``u``, ``v`` unrelated in the tree.

The tree is always rooted at the source, so none of these sides holds it.
Each family is searched separately and the best of the three wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numba import njit

from .errors import CapacityError, ConfigError, DomainError
from .graph import CutTuple, Graph, TieBreakConfig, side_sort_key
from .linkcut import LinkCutTree, pair_build, pair_min, pair_path_add
from .trees import Lca, RootedTree, SubtreeAggregates, subtree_aggregates, subtree_sums

ENGINES = ("quadratic", "bipartite-dnc")
QUADRATIC_MAX_N = 5000


@dataclass(frozen=True)
class CaseResult:
    """A candidate cut described by tree vertices.

    ``one_respecting``: ``u↓``; ``descendant``: ``u↓ \\ v↓``;
    ``independent``: ``u↓ ∪ v↓``.
    """

    case: str
    u: int
    v: int | None
    tuple: CutTuple

    def side(self, tree: RootedTree) -> frozenset:
        down_u = tree.descendants(self.u)
        if self.case == "one_respecting":
            return down_u
        if self.case == "descendant":
            return down_u - tree.descendants(self.v)
        return down_u | tree.descendants(self.v)


class TreeContext:
    """Per-(graph, tree, config) quantities shared by the three searches."""

    def __init__(self, g: Graph, tree: RootedTree, cfg: TieBreakConfig):
        if tree.root != cfg.s:
            raise DomainError("the tree must be rooted at the source vertex")
        if tree.n != g.n:
            raise DomainError("tree and graph disagree on the vertex count")
        self.g, self.tree, self.cfg = g, tree, cfg
        keep = g.weight > 0
        self.ex = g.src[keep]
        self.ey = g.dst[keep]
        self.ew = g.weight[keep]
        self.lca = Lca(tree)(self.ex, self.ey) if len(self.ex) else np.zeros(0, np.int64)
        self.agg: SubtreeAggregates = subtree_aggregates(tree, cfg)

    @cached_property
    def cut_sub(self) -> np.ndarray:
        """``cut(v↓)`` for every vertex: weighted degree mass of the subtree
        minus twice the weight of edges whose LCA lies inside it."""
        at_lca = np.zeros(self.g.n, dtype=np.int64)
        np.add.at(at_lca, self.lca, self.ew)
        return subtree_sums(self.tree, self.g.degrees) - 2 * subtree_sums(self.tree, at_lca)

    @cached_property
    def by_lca(self):
        """Edges grouped by LCA as CSR arrays ``(ptr, x, y, w)``."""
        idx = np.argsort(self.lca, kind="stable")
        ptr = np.zeros(self.g.n + 1, dtype=np.int64)
        np.add.at(ptr, self.lca + 1, 1)
        return (np.cumsum(ptr), np.ascontiguousarray(self.ex[idx]),
                np.ascontiguousarray(self.ey[idx]), np.ascontiguousarray(self.ew[idx]))

    @cached_property
    def lca_endpoints(self):
        """Endpoint updates grouped by LCA as CSR ``(ptr, vertex, weight)``.

        Every edge contributes its endpoints other than the LCA; repeated
        endpoints are merged and each group is sorted by preorder position,
        so consecutive path updates share most of their nodes.
        """
        n = self.g.n
        lca = np.concatenate([self.lca, self.lca])
        end = np.concatenate([self.ex, self.ey])
        w = np.concatenate([self.ew, self.ew])
        keep = end != lca
        lca, end, w = lca[keep], end[keep], w[keep]
        key = lca * n + self.tree.euler_first[end]
        uniq, inv = np.unique(key, return_inverse=True)
        total = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(total, inv, w)
        owner = uniq // n
        ptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(ptr, owner + 1, 1)
        return np.cumsum(ptr), np.ascontiguousarray(self.tree.order[uniq % n]), total

    def down_tuple(self, v: int) -> CutTuple:
        return CutTuple(int(self.cut_sub[v]), int(self.agg.ln[v]), int(self.agg.priority[v]))


def _context(g, tree, cfg, ctx):
    return ctx if ctx is not None else TreeContext(g, tree, cfg)


# --- one tree edge ---------------------------------------------------------

def one_respecting_tuples(g: Graph, tree: RootedTree, cfg: TieBreakConfig,
                          ctx: TreeContext | None = None) -> dict[int, CutTuple]:
    ctx = _context(g, tree, cfg, ctx)
    return {int(v): ctx.down_tuple(v) for v in tree.order[1:]}


def best_one_respecting(g: Graph, tree: RootedTree, cfg: TieBreakConfig,
                        ctx: TreeContext | None = None) -> CaseResult:
    ctx = _context(g, tree, cfg, ctx)
    verts = tree.order[1:]
    if len(verts) == 0:
        raise DomainError("a single vertex has no cuts")
    pick = np.lexsort((ctx.agg.priority[verts], ctx.agg.ln[verts], ctx.cut_sub[verts]))[0]
    v = int(verts[pick])
    return CaseResult("one_respecting", v, None, ctx.down_tuple(v))


# --- descendant pairs -------------------------------------------------------

def a1_cost_stream(g: Graph, tree: RootedTree, ctx: TreeContext | None = None,
                   cfg: TieBreakConfig | None = None):
    """Yield ``(step, u, deltas)`` in preorder.

    Start every vertex at ``a1(v) = cut(v↓)``. ``deltas`` is a list of
    ``(vertex, amount)`` path-to-root additions to apply once ``u`` has
    been handled, before the next vertex. With that schedule, when ``u`` is
    reached every proper descendant ``v`` holds
    ``a1(v) = cut(v↓) - 2 w(v↓, V \\ u↓)``, hence
    ``cut(u↓ \\ v↓) = cut(u↓) + a1(v)``.

    The additions retire the edges whose LCA is ``u``: such an edge stops
    leaving ``x↓`` towards the outside of the current subtree once the
    tour moves below its LCA.
    """
    if ctx is None:
        ctx = TreeContext(g, tree, cfg if cfg is not None else TieBreakConfig.with_source(g.n, tree.root))
    ptr, ex, ey, ew = ctx.by_lca
    for step, u in enumerate(tree.order.tolist()):
        deltas = []
        back = 0
        for k in range(ptr[u], ptr[u + 1]):
            for end in (int(ex[k]), int(ey[k])):
                if end != u:
                    deltas.append((end, -2 * int(ew[k])))
                    back += 2 * int(ew[k])
        if back:
            deltas.append((u, back))
        yield step, u, deltas


@dataclass
class DescendantTrace:
    """Per-vertex record of one descendant-search run (vertex-indexed arrays).

    ``case`` is 0 where ``u`` was skipped, else 1 or 2. ``x`` and ``ell``
    are only meaningful for case 1.
    """

    case: np.ndarray
    x: np.ndarray
    ell: np.ndarray
    v: np.ndarray
    value: np.ndarray
    ln: np.ndarray
    priority: np.ndarray

    @classmethod
    def empty(cls, n):
        z = lambda: np.full(n, -1, dtype=np.int64)  # noqa: E731
        return cls(np.zeros(n, dtype=np.int64), z(), z(), z(), z(), z(), z())

    def best(self, tree: RootedTree) -> CaseResult | None:
        us = tree.order[self.case[tree.order] > 0]
        if len(us) == 0:
            return None
        pick = np.lexsort((self.priority[us], self.ln[us], self.value[us]))[0]
        u = int(us[pick])
        return CaseResult("descendant", u, int(self.v[u]),
                          CutTuple(int(self.value[u]), int(self.ln[u]), int(self.priority[u])))


class RestrictionError(AssertionError):
    """Case 1 found no minimum descendant cut on the restricted path."""


def _initial_costs(ctx: TreeContext):
    cut, agg = ctx.cut_sub, ctx.agg
    t1 = np.stack([cut, -agg.ln, agg.priority], axis=1)
    t2 = np.stack([cut, np.zeros_like(cut), -agg.priority], axis=1)
    return t1, t2


def _descendant_reference(ctx: TreeContext, observer=None) -> DescendantTrace:
    """Descendant search driven through the :class:`LinkCutTree` API.

    ``observer(u, case, t2, x, ell)`` is called while the case-1/case-2
    restriction is active on ``t2``.
    """
    tree, agg = ctx.tree, ctx.agg
    c1, c2 = _initial_costs(ctx)
    t1 = LinkCutTree(tree, c1)
    t2 = LinkCutTree(tree, c2)
    trace = DescendantTrace.empty(tree.n)
    for _, u, deltas in a1_cost_stream(ctx.g, tree, ctx):
        if u != tree.root and tree.size[u] > 1:
            x, (a1, a2, a3) = t1.subtree_min(u, proper=True)
            ln_u, ln_vertex = int(agg.ln[u]), int(agg.ln_vertex[u])
            if a2 == -ln_u:
                _, ell = agg.h_index.subtree_minus_min(u, x)
                t2.add(x, (0, -1, 0))
                t2.add(ell, (0, 1, 0))
                v, (b1, b2, b3) = t2.subtree_min(u, proper=True)
                if observer:
                    observer(u, 1, t2, x, ell)
                t2.add(x, (0, 1, 0))
                t2.add(ell, (0, -1, 0))
                if b2 != -1:
                    raise RestrictionError(f"no minimum descendant cut of {u} on the restricted path")
                trace.case[u], trace.x[u], trace.ell[u] = 1, x, ell
            else:
                t2.add(ln_vertex, (0, 1, 0))
                v, (b1, b2, b3) = t2.subtree_min(u, proper=True)
                if observer:
                    observer(u, 2, t2, None, ln_vertex)
                t2.add(ln_vertex, (0, -1, 0))
                trace.case[u] = 2
            trace.v[u] = v
            trace.value[u] = ctx.cut_sub[u] + b1
            trace.ln[u] = agg.h_index.subtree_minus_min(u, v)[0]
            trace.priority[u] = agg.priority[u] - agg.priority[v]
        for w, amount in deltas:
            t1.add(w, (amount, 0, 0))
            t2.add(w, (amount, 0, 0))
    return trace


@njit(cache=True)
def _rmq_pos(vals, table, logs, i, j):
    k = logs[j - i + 1]
    a = table[k, i]
    b = table[k, j - (1 << k) + 1]
    if vals[b] < vals[a] or (vals[b] == vals[a] and b < a):
        return b
    return a


@njit(cache=True)
def _minus_min_pos(vals, table, logs, first, last, u, w):
    best = _rmq_pos(vals, table, logs, first[u], first[w] - 1)
    if last[w] < last[u]:
        other = _rmq_pos(vals, table, logs, last[w], last[u] - 1)
        if vals[other] < vals[best]:
            best = other
    return best


@njit(cache=True)
def _descendant_kernel(c1, c2, order, first, last, size_v, head, parent, cut_sub, ln, ln_vertex,
                       psub, hvals, htable, hlog, ptr, ends, ew,
                       case, xs, ells, vs, value, lnv, pv):
    # Both rows live in one paired tree. Queries only look at proper
    # descendants of u, so every update stops below u.
    t, d = pair_build(c1, c2)
    size = d.shape[0]
    height = 0
    while (1 << height) < size:
        height += 1
    out = np.empty(4, dtype=np.int64)
    n = order.shape[0]
    for step in range(n):
        u = order[step]
        if parent[u] >= 0 and size_v[u] > 1:
            lo = first[u] + 1
            hi = last[u]
            pair_min(t, d, size, height, lo, hi, 0, out)
            x = order[out[3]]
            if out[1] == -ln[u]:
                ell = order[_minus_min_pos(hvals, htable, hlog, first, last, u, x)]
                pair_path_add(t, d, size, first, head, parent, x, u, 0, -1)
                pair_path_add(t, d, size, first, head, parent, ell, u, 0, 1)
                pair_min(t, d, size, height, lo, hi, 4, out)
                pair_path_add(t, d, size, first, head, parent, x, u, 0, 1)
                pair_path_add(t, d, size, first, head, parent, ell, u, 0, -1)
                if out[1] != -1:
                    return u
                case[u] = 1
                xs[u] = x
                ells[u] = ell
            else:
                lv = ln_vertex[u]
                pair_path_add(t, d, size, first, head, parent, lv, u, 0, 1)
                pair_min(t, d, size, height, lo, hi, 4, out)
                pair_path_add(t, d, size, first, head, parent, lv, u, 0, -1)
                case[u] = 2
            v = order[out[3]]
            vs[u] = v
            value[u] = cut_sub[u] + out[0]
            lnv[u] = hvals[_minus_min_pos(hvals, htable, hlog, first, last, u, v)]
            pv[u] = psub[u] - psub[v]
        # edges with LCA u: -2w on the paths from each endpoint up to u
        # (the matching +2w from u to the root cancels above u)
        for k in range(ptr[u], ptr[u + 1]):
            pair_path_add(t, d, size, first, head, parent, ends[k], u, -2 * ew[k], 0)
    return -1


def _descendant_fast(ctx: TreeContext) -> DescendantTrace:
    tree, agg = ctx.tree, ctx.agg
    c1, c2 = _initial_costs(ctx)
    trace = DescendantTrace.empty(tree.n)
    ptr, ends, ew = ctx.lca_endpoints
    table = agg.h_index.table
    bad = _descendant_kernel(
        np.ascontiguousarray(c1[tree.order]), np.ascontiguousarray(c2[tree.order]),
        tree.order, tree.euler_first, tree.euler_last, tree.size, tree.head,
        tree.parent_or_none, ctx.cut_sub, agg.ln, agg.ln_vertex, agg.priority,
        table.values, table.table(), table.log, ptr, ends, ew,
        trace.case, trace.x, trace.ell, trace.v, trace.value, trace.ln, trace.priority)
    if bad >= 0:
        raise RestrictionError(f"no minimum descendant cut of {bad} on the restricted path")
    return trace


def descendant_trace(g: Graph, tree: RootedTree, cfg: TieBreakConfig,
                     ctx: TreeContext | None = None, reference: bool = False,
                     observer=None) -> DescendantTrace:
    ctx = _context(g, tree, cfg, ctx)
    if reference or observer is not None:
        return _descendant_reference(ctx, observer)
    return _descendant_fast(ctx)


def descendant_search(g: Graph, tree: RootedTree, cfg: TieBreakConfig,
                      ctx: TreeContext | None = None, reference: bool = False) -> CaseResult | None:
    """Best cut of the form ``u↓ \\ v↓``; None if no vertex has a proper descendant."""
    return descendant_trace(g, tree, cfg, ctx, reference).best(tree)


# --- independent pairs ------------------------------------------------------

def _lex_pick(value, ln, pri):
    """Position of the lexicographic minimum of three flat arrays (first on ties)."""
    i = np.flatnonzero(value == value.min())
    i = i[ln[i] == ln[i].min()]
    i = i[pri[i] == pri[i].min()]
    return int(i[0])


def _independent_quadratic(ctx: TreeContext) -> CaseResult | None:
    tree, n = ctx.tree, ctx.g.n
    if n < 3:
        return None
    if n > QUADRATIC_MAX_N:
        raise CapacityError(f"quadratic independent engine is limited to n <= {QUADRATIC_MAX_N}")
    f, l = tree.euler_first, tree.euler_last
    mat = np.zeros((n + 1, n + 1), dtype=np.int64)
    np.add.at(mat, (f[ctx.ex] + 1, f[ctx.ey] + 1), ctx.ew)
    np.add.at(mat, (f[ctx.ey] + 1, f[ctx.ex] + 1), ctx.ew)
    pref = mat.cumsum(axis=0).cumsum(axis=1)
    verts = tree.order[1:]
    fv, lv = f[verts], l[verts]
    cut, ln, pri = ctx.cut_sub[verts], ctx.agg.ln[verts], ctx.agg.priority[verts]
    best = None
    block = max(1, 4_000_000 // max(1, len(verts)))
    for s in range(0, len(verts), block):
        rows = slice(s, s + block)
        fi, li = fv[rows, None], lv[rows, None]
        ok = li <= fv[None, :]
        if not ok.any():
            continue
        between = (pref[li, lv[None, :]] - pref[fi, lv[None, :]]
                   - pref[li, fv[None, :]] + pref[fi, fv[None, :]])
        value = cut[rows, None] + cut[None, :] - 2 * between
        lnp = np.minimum(ln[rows, None], ln[None, :])
        prp = pri[rows, None] + pri[None, :]
        ii, jj = np.nonzero(ok)
        k = _lex_pick(value[ii, jj], lnp[ii, jj], prp[ii, jj])
        cand = (CutTuple(int(value[ii[k], jj[k]]), int(lnp[ii[k], jj[k]]), int(prp[ii[k], jj[k]])),
                s + int(ii[k]), int(jj[k]))
        if best is None or cand[0] < best[0]:
            best = cand
    if best is None:
        return None
    t, i, j = best
    return CaseResult("independent", int(verts[i]), int(verts[j]), t)


@dataclass(frozen=True)
class BipartiteInstance:
    """Two rooted trees and weighted edges running between them.

    A tree edge is named by its lower vertex. ``parent1``/``parent2`` map
    every lower vertex to its parent inside the tree (None above the top
    edge). Choosing edges ``e`` of T1 and ``e'`` of T2 selects the vertices
    below them; a cross edge ``(x, y, cost)`` is charged when ``x`` is below
    ``e`` and ``y`` is below ``e'``. Costs are ``(value, priority)`` pairs
    added componentwise.
    """

    parent1: dict
    cost1: dict
    parent2: dict
    cost2: dict
    cross: list

    @property
    def size(self) -> int:
        return len(self.cost1) + len(self.cost2) + len(self.cross)


def _edges_above(parent: dict, x):
    while x is not None:
        yield x
        x = parent[x]


def _pair_costs(inst: BipartiteInstance):
    left, right = sorted(inst.cost1), sorted(inst.cost2)
    li = {e: i for i, e in enumerate(left)}
    ri = {e: i for i, e in enumerate(right)}
    c0 = np.zeros((len(left), len(right)), dtype=np.int64)
    c1 = np.zeros_like(c0)
    c0 += np.array([inst.cost1[e][0] for e in left], dtype=np.int64)[:, None]
    c1 += np.array([inst.cost1[e][1] for e in left], dtype=np.int64)[:, None]
    c0 += np.array([inst.cost2[e][0] for e in right], dtype=np.int64)[None, :]
    c1 += np.array([inst.cost2[e][1] for e in right], dtype=np.int64)[None, :]
    for x, y, (a, b) in inst.cross:
        rows = [li[e] for e in _edges_above(inst.parent1, x)]
        cols = [ri[e] for e in _edges_above(inst.parent2, y)]
        c0[np.ix_(rows, cols)] += a
        c1[np.ix_(rows, cols)] += b
    return left, right, c0, c1


def solve_bipartite(inst: BipartiteInstance):
    """Pair ``(e, e', (value, priority))`` of minimum total cost."""
    if not inst.cost1 or not inst.cost2:
        raise DomainError("both trees need at least one edge")
    left, right, c0, c1 = _pair_costs(inst)
    flat = np.lexsort((c1.ravel(), c0.ravel()))[0]
    i, j = divmod(int(flat), len(right))
    return left[i], right[j], (int(c0[i, j]), int(c1[i, j]))


def bipartite_best_partners(inst: BipartiteInstance, reverse: bool = False) -> dict:
    """For every edge of T1 (T2 if ``reverse``) its cheapest partner and the total."""
    left, right, c0, c1 = _pair_costs(inst)
    out = {}
    if reverse:
        left, right, c0, c1 = right, left, c0.T, c1.T
    for i, e in enumerate(left):
        j = int(np.lexsort((c1[i], c0[i]))[0])
        out[e] = (right[j], (int(c0[i, j]), int(c1[i, j])))
    return out


def _independent_bipartite(ctx: TreeContext) -> CaseResult | None:
    """Split independent pairs by their LCA and the two child subtrees
    holding them; solve each split as a bipartite instance."""
    tree = ctx.tree
    cut, psub, ln = ctx.cut_sub, ctx.agg.priority, ctx.agg.ln
    ptr, ex, ey, ew = ctx.by_lca
    best = None
    for l in tree.order.tolist():
        kids = tree.children[l]
        if len(kids) < 2:
            continue
        top = {}
        for c in kids:
            for x in tree.descendants(c):
                top[x] = c
        crossing = {}
        for k in range(ptr[l], ptr[l + 1]):
            x, y = int(ex[k]), int(ey[k])
            if x == l or y == l:
                continue
            if tree.euler_first[top[x]] > tree.euler_first[top[y]]:
                x, y = y, x
            crossing.setdefault((top[x], top[y]), []).append((x, y, (-2 * int(ew[k]), 0)))
        for a_i, a in enumerate(kids):
            for b in kids[a_i + 1:]:
                if tree.euler_first[a] > tree.euler_first[b]:
                    a, b = b, a
                sub_a, sub_b = tree.descendants(a), tree.descendants(b)
                inst = BipartiteInstance(
                    {x: (None if x == a else int(tree.parent[x])) for x in sub_a},
                    {x: (int(cut[x]), int(psub[x])) for x in sub_a},
                    {y: (None if y == b else int(tree.parent[y])) for y in sub_b},
                    {y: (int(cut[y]), int(psub[y])) for y in sub_b},
                    crossing.get((a, b), []))
                for rev in (False, True):
                    for e, (e2, (val, pri)) in bipartite_best_partners(inst, rev).items():
                        t = CutTuple(val, int(min(ln[e], ln[e2])), pri)
                        pair = (e2, e) if rev else (e, e2)
                        if best is None or t < best[0]:
                            best = (t, pair)
    if best is None:
        return None
    t, (u, v) = best
    return CaseResult("independent", u, v, t)


def independent_search(g: Graph, tree: RootedTree, cfg: TieBreakConfig,
                       engine: str = "quadratic", ctx: TreeContext | None = None) -> CaseResult | None:
    """Best cut of the form ``u↓ ∪ v↓`` with ``u``, ``v`` unrelated; None if no such pair."""
    if engine not in ENGINES:
        raise ConfigError(f"unknown independent engine {engine!r}; choose from {ENGINES}")
    ctx = _context(g, tree, cfg, ctx)
    if engine == "quadratic":
        return _independent_quadratic(ctx)
    return _independent_bipartite(ctx)


# --- combined ---------------------------------------------------------------

def pick_best(results, tree_of, cfg: TieBreakConfig):
    """Lexicographic minimum over ``(result, tree)`` pairs.

    Equal tuples fall back to comparing the sides listed in ``h`` order, so
    the choice does not depend on the order of ``results``.
    """
    best = None
    best_key = None
    for r in results:
        if r is None:
            continue
        if best is None or r.tuple < best.tuple:
            best, best_key = r, None
        elif r.tuple == best.tuple:
            if best_key is None:
                best_key = side_sort_key(cfg, best.side(tree_of(best)))
            key = side_sort_key(cfg, r.side(tree_of(r)))
            if key < best_key:
                best, best_key = r, key
    return best


def best_two_respecting(g: Graph, tree: RootedTree, cfg: TieBreakConfig,
                        engine: str = "quadratic", ctx: TreeContext | None = None,
                        timings: dict | None = None) -> CaseResult:
    from time import perf_counter

    clock = perf_counter()
    ctx = _context(g, tree, cfg, ctx)
    one = best_one_respecting(g, tree, cfg, ctx)
    t1 = perf_counter()
    desc = descendant_search(g, tree, cfg, ctx)
    t2 = perf_counter()
    ind = independent_search(g, tree, cfg, engine, ctx)
    t3 = perf_counter()
    if timings is not None:
        timings["one_respecting"] = timings.get("one_respecting", 0.0) + t1 - clock
        timings["descendant"] = timings.get("descendant", 0.0) + t2 - t1
        timings["independent"] = timings.get("independent", 0.0) + t3 - t2
    return pick_best([one, desc, ind], lambda r: tree, cfg)
