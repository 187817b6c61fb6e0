"""Rooted tree with tuple vertex costs: path-to-root ADD and subtree MIN.

The topology never changes here, only costs, so instead of splay-based
link/cut trees this uses the heavy-path preorder layout from
:mod:`canoncut.trees` over one lazy segment tree. A path to the root is
O(log n) position ranges and a subtree is one range, giving O(log^2 n) per
ADD and O(log n) per SUBTREE.

Costs are triples of int64 compared lexicographically. Equal costs are
broken toward the smaller preorder position.

The ``seg_*`` and ``path_add`` kernels are plain numba functions so that
the descendant search in :mod:`canoncut.respecting` can drive them without
returning to Python.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import DomainError, StructureError
from .trees import RootedTree

INF = np.int64(1) << np.int64(61)


@njit(cache=True, inline="always")
def _lt(t, a, b):
    for k in range(4):
        if t[a, k] != t[b, k]:
            return t[a, k] < t[b, k]
    return False


@njit(cache=True)
def _pull(t, d, p):
    while p > 1:
        p >>= 1
        a = 2 * p
        b = a + 1
        c = b if _lt(t, b, a) else a
        t[p, 0] = t[c, 0] + d[p, 0]
        t[p, 1] = t[c, 1] + d[p, 1]
        t[p, 2] = t[c, 2] + d[p, 2]
        t[p, 3] = t[c, 3]


@njit(cache=True, inline="always")
def _apply(t, d, size, p, x0, x1, x2):
    t[p, 0] += x0
    t[p, 1] += x1
    t[p, 2] += x2
    if p < size:
        d[p, 0] += x0
        d[p, 1] += x1
        d[p, 2] += x2


@njit(cache=True)
def _push(t, d, size, height, p):
    for s in range(height, 0, -1):
        i = p >> s
        if d[i, 0] != 0 or d[i, 1] != 0 or d[i, 2] != 0:
            _apply(t, d, size, 2 * i, d[i, 0], d[i, 1], d[i, 2])
            _apply(t, d, size, 2 * i + 1, d[i, 0], d[i, 1], d[i, 2])
            d[i, 0] = 0
            d[i, 1] = 0
            d[i, 2] = 0


@njit(cache=True)
def seg_build(costs):
    """Segment tree over ``costs`` (one row per position)."""
    n = costs.shape[0]
    size = 1
    while size < n:
        size *= 2
    t = np.empty((2 * size, 4), dtype=np.int64)
    for i in range(size):
        if i < n:
            t[size + i, 0] = costs[i, 0]
            t[size + i, 1] = costs[i, 1]
            t[size + i, 2] = costs[i, 2]
        else:
            t[size + i, 0] = INF
            t[size + i, 1] = INF
            t[size + i, 2] = INF
        t[size + i, 3] = i
    for p in range(size - 1, 0, -1):
        a = 2 * p
        c = a + 1 if _lt(t, a + 1, a) else a
        for k in range(4):
            t[p, k] = t[c, k]
    d = np.zeros((size, 3), dtype=np.int64)
    return t, d


@njit(cache=True)
def seg_add(t, d, size, lo, hi, x0, x1, x2):
    """Add (x0, x1, x2) to positions ``lo..hi-1``."""
    if lo >= hi:
        return
    l = lo + size
    r = hi + size
    l0, r0 = l, r - 1
    while l < r:
        if l & 1:
            _apply(t, d, size, l, x0, x1, x2)
            l += 1
        if r & 1:
            r -= 1
            _apply(t, d, size, r, x0, x1, x2)
        l >>= 1
        r >>= 1
    _pull(t, d, l0)
    _pull(t, d, r0)


@njit(cache=True)
def seg_min(t, d, size, height, lo, hi, out):
    """Write the minimum row over positions ``lo..hi-1`` into ``out``."""
    l = lo + size
    r = hi + size
    _push(t, d, size, height, l)
    _push(t, d, size, height, r - 1)
    out[0] = INF
    out[1] = INF
    out[2] = INF
    out[3] = INF
    while l < r:
        if l & 1:
            _take(t, l, out)
            l += 1
        if r & 1:
            r -= 1
            _take(t, r, out)
        l >>= 1
        r >>= 1


@njit(cache=True, inline="always")
def _take(t, p, out):
    for k in range(4):
        if t[p, k] != out[k]:
            if t[p, k] < out[k]:
                for j in range(4):
                    out[j] = t[p, j]
            return


@njit(cache=True)
def seg_point(t, d, size, height, pos, out):
    p = pos + size
    _push(t, d, size, height, p)
    for k in range(4):
        out[k] = t[p, k]


@njit(cache=True)
def path_add(t, d, size, first, head, parent, u, x0, x1, x2):
    """Add (x0, x1, x2) to every vertex from ``u`` up to the root.

    ``parent`` holds -1 at the root.
    """
    while u >= 0:
        h = head[u]
        seg_add(t, d, size, first[h], first[u] + 1, x0, x1, x2)
        u = parent[h]


# --- paired rows -------------------------------------------------------------
# The descendant search keeps two cost rows per vertex that always receive the
# same value deltas. Storing both in one segment tree halves the traversals.
# Node layout: columns 0..3 are the minimum of row A (value, a1, a2, position),
# columns 4..7 the minimum of row B. Lazy tags: shared value delta and a delta
# on column 1 of row B.

@njit(cache=True, inline="always")
def _lt_at(t, a, b, o):
    for k in range(o, o + 4):
        if t[a, k] != t[b, k]:
            return t[a, k] < t[b, k]
    return False


@njit(cache=True)
def _pull2(t, d, p):
    while p > 1:
        p >>= 1
        a = 2 * p
        b = a + 1
        c = b if _lt_at(t, b, a, 0) else a
        t[p, 0] = t[c, 0] + d[p, 0]
        t[p, 1] = t[c, 1]
        t[p, 2] = t[c, 2]
        t[p, 3] = t[c, 3]
        c = b if _lt_at(t, b, a, 4) else a
        t[p, 4] = t[c, 4] + d[p, 0]
        t[p, 5] = t[c, 5] + d[p, 1]
        t[p, 6] = t[c, 6]
        t[p, 7] = t[c, 7]


@njit(cache=True, inline="always")
def _apply2(t, d, size, p, dv, db):
    t[p, 0] += dv
    t[p, 4] += dv
    t[p, 5] += db
    if p < size:
        d[p, 0] += dv
        d[p, 1] += db


@njit(cache=True)
def _push2(t, d, size, height, p):
    for s in range(height, 0, -1):
        i = p >> s
        if d[i, 0] != 0 or d[i, 1] != 0:
            _apply2(t, d, size, 2 * i, d[i, 0], d[i, 1])
            _apply2(t, d, size, 2 * i + 1, d[i, 0], d[i, 1])
            d[i, 0] = 0
            d[i, 1] = 0


@njit(cache=True)
def pair_build(rows_a, rows_b):
    """Paired segment tree; ``rows_a`` and ``rows_b`` must share column 0."""
    n = rows_a.shape[0]
    size = 1
    while size < n:
        size *= 2
    t = np.empty((2 * size, 8), dtype=np.int64)
    for i in range(size):
        for k in range(3):
            t[size + i, k] = rows_a[i, k] if i < n else INF
            t[size + i, 4 + k] = rows_b[i, k] if i < n else INF
        t[size + i, 3] = i
        t[size + i, 7] = i
    for p in range(size - 1, 0, -1):
        a = 2 * p
        c = a + 1 if _lt_at(t, a + 1, a, 0) else a
        for k in range(4):
            t[p, k] = t[c, k]
        c = a + 1 if _lt_at(t, a + 1, a, 4) else a
        for k in range(4, 8):
            t[p, k] = t[c, k]
    d = np.zeros((size, 2), dtype=np.int64)
    return t, d


@njit(cache=True)
def pair_add(t, d, size, lo, hi, dv, db):
    if lo >= hi:
        return
    l = lo + size
    r = hi + size
    l0, r0 = l, r - 1
    while l < r:
        if l & 1:
            _apply2(t, d, size, l, dv, db)
            l += 1
        if r & 1:
            r -= 1
            _apply2(t, d, size, r, dv, db)
        l >>= 1
        r >>= 1
    _pull2(t, d, l0)
    _pull2(t, d, r0)


@njit(cache=True)
def pair_min(t, d, size, height, lo, hi, o, out):
    """Minimum of row A (``o=0``) or row B (``o=4``) over ``lo..hi-1``."""
    l = lo + size
    r = hi + size
    _push2(t, d, size, height, l)
    _push2(t, d, size, height, r - 1)
    for k in range(4):
        out[k] = INF
    while l < r:
        if l & 1:
            _take_at(t, l, o, out)
            l += 1
        if r & 1:
            r -= 1
            _take_at(t, r, o, out)
        l >>= 1
        r >>= 1


@njit(cache=True, inline="always")
def _take_at(t, p, o, out):
    for k in range(4):
        if t[p, o + k] != out[k]:
            if t[p, o + k] < out[k]:
                for j in range(4):
                    out[j] = t[p, o + j]
            return


@njit(cache=True)
def pair_path_add(t, d, size, first, head, parent, u, top, dv, db):
    """Path add from ``u`` up to the root (``top < 0``) or up to, but
    excluding, the ancestor ``top``."""
    if top < 0:
        while u >= 0:
            h = head[u]
            pair_add(t, d, size, first[h], first[u] + 1, dv, db)
            u = parent[h]
        return
    while head[u] != head[top]:
        h = head[u]
        pair_add(t, d, size, first[h], first[u] + 1, dv, db)
        u = parent[h]
    pair_add(t, d, size, first[top] + 1, first[u] + 1, dv, db)


class LinkCutTree:
    """Fixed rooted tree with per-vertex cost triples.

    ``add(u, delta)`` adds ``delta`` to every vertex on the path from ``u``
    to the root; ``subtree_min(u)`` returns the minimum-cost vertex in
    ``u``'s subtree.
    """

    def __init__(self, tree: RootedTree, costs):
        costs = np.asarray(costs, dtype=np.int64)
        if costs.shape != (tree.n, 3):
            raise StructureError(f"expected costs of shape ({tree.n}, 3), got {costs.shape}")
        self.tree = tree
        self._parent = tree.parent_or_none
        self.t, self.d = seg_build(np.ascontiguousarray(costs[tree.order]))
        self.size = len(self.d)
        self.height = self.size.bit_length() - 1
        self._out = np.empty(4, dtype=np.int64)

    def _check(self, u):
        if not 0 <= u < self.tree.n:
            raise DomainError(f"unknown vertex {u}")

    def add(self, u: int, delta) -> None:
        self._check(u)
        x0, x1, x2 = (int(x) for x in delta)
        path_add(self.t, self.d, self.size, self.tree.euler_first, self.tree.head,
                 self._parent, u, x0, x1, x2)

    def subtree_min(self, u: int, proper: bool = False):
        """``(vertex, cost)`` minimising cost over ``u``'s subtree.

        With ``proper=True`` ``u`` itself is left out; returns None when that
        leaves nothing.
        """
        self._check(u)
        lo = int(self.tree.euler_first[u]) + (1 if proper else 0)
        hi = int(self.tree.euler_last[u])
        if lo >= hi:
            return None
        seg_min(self.t, self.d, self.size, self.height, lo, hi, self._out)
        return int(self.tree.order[self._out[3]]), tuple(int(x) for x in self._out[:3])

    def cost(self, v: int) -> tuple[int, int, int]:
        self._check(v)
        seg_point(self.t, self.d, self.size, self.height, int(self.tree.euler_first[v]), self._out)
        return tuple(int(x) for x in self._out[:3])

    def costs(self) -> np.ndarray:
        """Current cost rows indexed by vertex."""
        return np.array([self.cost(v) for v in range(self.tree.n)], dtype=np.int64)


def lct_build(tree: RootedTree, init) -> LinkCutTree:
    return LinkCutTree(tree, init)


def lct_add(t: LinkCutTree, u: int, delta) -> None:
    t.add(u, delta)


def lct_subtree_min(t: LinkCutTree, u: int):
    return t.subtree_min(u)
