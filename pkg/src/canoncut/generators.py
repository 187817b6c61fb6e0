"""Random graph families used by ``verify``, ``bench`` and the tests."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def random_connected_graph(rng: np.random.Generator, n: int, m: int | None = None,
                           wmax: int = 8) -> Graph:
    """Simple connected graph: a random spanning tree plus ``m - n + 1``
    distinct extra pairs. ``m`` defaults to a uniform draw in
    ``[n - 1, n(n - 1)/2]``."""
    top = n * (n - 1) // 2
    if m is None:
        m = int(rng.integers(n - 1, top + 1))
    m = max(n - 1, min(m, top))
    perm = rng.permutation(n)
    pairs = set()
    for i in range(1, n):
        a, b = int(perm[i]), int(perm[rng.integers(i)])
        pairs.add((min(a, b), max(a, b)))
    if m > n - 1:
        rest = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in pairs]
        pick = rng.choice(len(rest), size=m - (n - 1), replace=False)
        pairs.update(rest[int(i)] for i in pick)
    pairs = sorted(pairs)
    w = rng.integers(1, wmax + 1, size=len(pairs))
    return Graph.from_edges(n, [(a, b, int(x)) for (a, b), x in zip(pairs, w)])


def random_sparse_graph(rng: np.random.Generator, n: int, m: int, wmax: int = 8) -> Graph:
    """Connected multigraph with about ``m`` edges for large ``n`` (no
    quadratic pair listing): random tree plus uniform random extra edges."""
    parent = rng.integers(0, np.maximum(np.arange(1, n), 1))
    perm = rng.permutation(n)
    src = [perm[1:], None]
    dst = [perm[parent], None]
    extra = max(0, m - (n - 1))
    a = rng.integers(0, n, size=extra)
    b = rng.integers(0, n - 1, size=extra)
    b = np.where(b >= a, b + 1, b)
    src[1], dst[1] = a, b
    s = np.concatenate(src)
    d = np.concatenate(dst)
    w = rng.integers(1, wmax + 1, size=len(s))
    return Graph(n, s, d, w)


def random_spanning_tree(rng: np.random.Generator, g: Graph) -> list[tuple[int, int]]:
    """Uniform-weight random spanning tree of a connected graph (Kruskal on
    random keys)."""
    order = rng.permutation(g.m)
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = []
    for i in order.tolist():
        u, v = int(g.src[i]), int(g.dst[i])
        ru, rv = find(u), find(v)
        if ru != rv and g.weight[i] > 0:
            parent[ru] = rv
            out.append((u, v))
    return out


def corpus(count: int, seed: int, n_lo: int = 3, n_hi: int = 12, wmax: int = 8) -> list[Graph]:
    rng = np.random.default_rng(seed)
    return [random_connected_graph(rng, int(rng.integers(n_lo, n_hi + 1)), wmax=wmax)
            for _ in range(count)]
