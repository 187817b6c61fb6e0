"""Rooted spanning trees and static subtree queries.

Trees are laid out in a heavy-child-first DFS preorder. Every subtree is
then a contiguous block of positions, and every vertex-to-root path splits
into O(log n) contiguous blocks (one per heavy path). The same layout backs
the range-minimum tables here and the path-update structure in
:mod:`canoncut.linkcut`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DomainError, StructureError
from .graph import Graph, TieBreakConfig


@njit(cache=True)
def _layout(n, root, ptr, nbr):
    parent = np.full(n, -2, dtype=np.int64)
    parent[root] = -1
    bfs = np.empty(n, dtype=np.int64)
    bfs[0] = root
    head_i, tail = 0, 1
    while head_i < tail:
        u = bfs[head_i]
        head_i += 1
        for k in range(ptr[u], ptr[u + 1]):
            v = nbr[k]
            if parent[v] == -2:
                parent[v] = u
                bfs[tail] = v
                tail += 1
    if tail < n:
        return False, parent, parent, parent, parent, parent, parent
    size = np.ones(n, dtype=np.int64)
    for i in range(n - 1, 0, -1):
        v = bfs[i]
        size[parent[v]] += size[v]
    heavy = np.full(n, -1, dtype=np.int64)
    for v in range(n):
        p = parent[v]
        if p >= 0:
            h = heavy[p]
            if h < 0 or size[v] > size[h] or (size[v] == size[h] and v < h):
                heavy[p] = v
    order = np.empty(n, dtype=np.int64)
    first = np.empty(n, dtype=np.int64)
    depth = np.zeros(n, dtype=np.int64)
    head = np.empty(n, dtype=np.int64)
    head[root] = root
    stack = np.empty(n, dtype=np.int64)
    top = 0
    stack[0] = root
    top = 1
    idx = 0
    while top > 0:
        top -= 1
        u = stack[top]
        order[idx] = u
        first[u] = idx
        idx += 1
        # light children in decreasing id so the smallest id pops first,
        # then the heavy child on top
        for k in range(ptr[u + 1] - 1, ptr[u] - 1, -1):
            v = nbr[k]
            if parent[v] == u and v != heavy[u]:
                depth[v] = depth[u] + 1
                head[v] = v
                stack[top] = v
                top += 1
        h = heavy[u]
        if h >= 0:
            depth[h] = depth[u] + 1
            head[h] = head[u]
            stack[top] = h
            top += 1
    return True, parent, size, order, first, depth, head


@dataclass(frozen=True, eq=False)
class RootedTree:
    """A spanning tree rooted at ``root``.

    ``parent[root] == root``. ``euler_first[v]`` is the preorder position of
    ``v`` and ``euler_last[v]`` is one past the last position of its subtree,
    so ``x`` is a descendant of ``v`` iff
    ``euler_first[v] <= euler_first[x] < euler_last[v]``.
    """

    root: int
    parent: np.ndarray
    children: list
    order: np.ndarray
    euler_first: np.ndarray
    euler_last: np.ndarray
    size: np.ndarray
    depth: np.ndarray
    head: np.ndarray

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def parent_or_none(self) -> np.ndarray:
        """Parent array with -1 at the root."""
        p = self.parent.copy()
        p[self.root] = -1
        return p

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Tree edges as (child, parent) pairs in preorder of the child."""
        return [(int(v), int(self.parent[v])) for v in self.order[1:]]

    def key(self) -> bytes:
        return self.parent.tobytes() + int(self.root).to_bytes(8, "little")

    def is_ancestor(self, a: int, b: int) -> bool:
        """True if ``a`` is an ancestor of ``b`` or equal to it."""
        return self.euler_first[a] <= self.euler_first[b] < self.euler_last[a]

    def descendants(self, v: int) -> frozenset:
        return frozenset(self.order[self.euler_first[v]:self.euler_last[v]].tolist())


def build_rooted(g: Graph | int, tree_edges, root: int) -> RootedTree:
    """Root the spanning tree given by ``tree_edges`` at ``root``."""
    n = g if isinstance(g, int) else g.n
    e = np.asarray(tree_edges, dtype=np.int64).reshape(-1, 2) if len(tree_edges) else \
        np.zeros((0, 2), dtype=np.int64)
    if len(e) != n - 1:
        raise StructureError(f"a spanning tree on {n} vertices has {n - 1} edges, got {len(e)}")
    if not 0 <= root < n:
        raise StructureError("root out of range")
    if len(e) and (e.min() < 0 or e.max() >= n or np.any(e[:, 0] == e[:, 1])):
        raise StructureError("tree edge endpoint out of range or self-loop")
    a = np.concatenate([e[:, 0], e[:, 1]])
    b = np.concatenate([e[:, 1], e[:, 0]])
    idx = np.lexsort((b, a))
    a, b = a[idx], b[idx]
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(ptr, a + 1, 1)
    ptr = np.cumsum(ptr)
    ok, parent, size, order, first, depth, head = _layout(n, root, ptr, b)
    if not ok:
        raise StructureError("tree edges do not span the vertex set")
    parent = parent.copy()
    parent[root] = root
    children = [[] for _ in range(n)]
    for v in order[1:].tolist():
        children[parent[v]].append(v)
    return RootedTree(root, parent, children, order, first, first + size, size, depth, head)


class SparseTable:
    """Range-minimum queries over a fixed integer array.

    O(n log n) build, O(1) query. Ties resolve to the smaller index.
    Indices are 0-based and ranges inclusive.
    """

    def __init__(self, values):
        a = np.asarray(values, dtype=np.int64)
        self.values = a
        n = len(a)
        levels = [np.arange(n, dtype=np.int64)]
        k = 1
        while 2 * k <= n:
            prev = levels[-1]
            span = n - 2 * k + 1
            left, right = prev[:span], prev[k:k + span]
            levels.append(np.where(a[right] < a[left], right, left))
            k *= 2
        self.levels = levels
        self.log = np.zeros(n + 1, dtype=np.int64)
        if n >= 2:
            self.log[2:] = np.floor(np.log2(np.arange(2, n + 1))).astype(np.int64)

    def __len__(self):
        return len(self.values)

    def argmin(self, i, j):
        """Index of the minimum of ``values[i..j]``; accepts arrays."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        if np.any(i < 0) or np.any(j >= len(self.values)) or np.any(i > j):
            raise IndexError("range out of bounds")
        k = self.log[j - i + 1]
        if k.ndim == 0:
            left = self.levels[int(k)][i]
            right = self.levels[int(k)][j - (1 << int(k)) + 1]
        else:
            table = self.table()
            left = table[k, i]
            right = table[k, j - (1 << k) + 1]
        a = self.values
        pick = np.where(a[right] < a[left], right, np.minimum(left, right))
        pick = np.where(a[left] < a[right], left, pick)
        return pick if pick.ndim else int(pick)

    def table(self) -> np.ndarray:
        """All levels stacked into one (levels, n) array, padded with -1."""
        if not hasattr(self, "_table"):
            n = len(self.values)
            t = np.full((len(self.levels), n), -1, dtype=np.int64)
            for k, lev in enumerate(self.levels):
                t[k, :len(lev)] = lev
            self._table = t
        return self._table

    def query(self, i, j):
        return self.values[self.argmin(i, j)]


def rmq(index: SparseTable, i: int, j: int) -> int:
    return int(index.query(i, j))


class SubtreeMinIndex:
    """Minimum of per-vertex values over ``v``'s subtree, or over the
    subtree of ``v`` with the subtree of a descendant ``w`` removed."""

    def __init__(self, tree: RootedTree, values):
        self.tree = tree
        self.values = np.asarray(values, dtype=np.int64)
        self.table = SparseTable(self.values[tree.order])

    def subtree_min(self, v: int) -> tuple[int, int]:
        t = self.tree
        pos = self.table.argmin(t.euler_first[v], t.euler_last[v] - 1)
        return int(self.table.values[pos]), int(t.order[pos])

    def subtree_minus_min(self, v: int, w: int) -> tuple[int, int]:
        t = self.tree
        if v == w or not t.is_ancestor(v, w):
            raise DomainError(f"{w} is not a proper descendant of {v}")
        # [v1, w1 - 1] is never empty because it holds v itself
        best = self.table.argmin(t.euler_first[v], t.euler_first[w] - 1)
        if t.euler_last[w] < t.euler_last[v]:
            other = self.table.argmin(t.euler_last[w], t.euler_last[v] - 1)
            if self.table.values[other] < self.table.values[best]:
                best = other
        return int(self.table.values[best]), int(t.order[best])

    def all_subtree_min(self) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised ``subtree_min`` for every vertex (values, argmin vertices)."""
        t = self.tree
        pos = self.table.argmin(t.euler_first, t.euler_last - 1)
        return self.table.values[pos], t.order[pos]


class Lca:
    """Lowest common ancestors from the preorder depth sequence."""

    def __init__(self, tree: RootedTree):
        self.tree = tree
        self.table = SparseTable(tree.depth[tree.order])

    def __call__(self, x, y):
        t = self.tree
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        px, py = t.euler_first[x], t.euler_first[y]
        lo = np.minimum(px, py)
        hi = np.maximum(px, py)
        same = lo == hi
        lo_q = np.where(same, hi, lo + 1)
        pos = self.table.argmin(lo_q, hi)
        out = t.parent[t.order[pos]]
        return np.where(same, x, out)


def subtree_sums(tree: RootedTree, values) -> np.ndarray:
    """Sum of ``values`` over every subtree, via preorder prefix sums."""
    v = np.asarray(values, dtype=np.int64)[tree.order]
    cs = np.zeros(len(v) + 1, dtype=np.int64)
    np.cumsum(v, out=cs[1:])
    return cs[tree.euler_last] - cs[tree.euler_first]


@dataclass(frozen=True, eq=False)
class SubtreeAggregates:
    """Per-vertex ``P(v↓)``, ``LN(v↓)`` (as an h value) and the vertex holding it."""

    priority: np.ndarray
    ln: np.ndarray
    ln_vertex: np.ndarray
    h_index: SubtreeMinIndex


def subtree_aggregates(tree: RootedTree, cfg: TieBreakConfig) -> SubtreeAggregates:
    psub = subtree_sums(tree, cfg.priority)
    h = cfg.h.copy()
    h[cfg.s] = cfg.n + 1  # the source never wins a minimum
    index = SubtreeMinIndex(tree, h)
    ln, ln_vertex = index.all_subtree_min()
    return SubtreeAggregates(psub, ln, ln_vertex, index)
