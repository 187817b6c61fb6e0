"""Spanning-tree packings that every minimum cut 2-respects (w.h.p.).

Recipe: estimate the minimum cut value, sample a skeleton whose edge
multiplicities are binomial thinnings of the integer weights so that the
skeleton's minimum cut is about ``sample_c * ln n``, then greedily pack
``ceil(trees_c * ln n)`` spanning trees on it, each a minimum spanning tree
under relative load ``(uses + 1) / multiplicity``. Random jitter on the
spanning-tree weights is the only other source of randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import minimum_spanning_tree

from .errors import ConnectivityError
from .graph import Graph, TieBreakConfig
from .trees import RootedTree, build_rooted, subtree_sums, Lca

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


def derive_seed(seed: int, i: int) -> int:
    """Seed of the ``i``-th independent packing."""
    return (seed ^ ((i + 1) * GOLDEN)) & MASK64


@dataclass(frozen=True)
class PackingParams:
    trees_c: float = 3.0
    sample_c: float = 6.0
    sample_rate: float | None = None  # overrides the estimate when set


@dataclass(frozen=True, eq=False)
class Packing:
    trees: list
    seed: int
    params: PackingParams = field(default_factory=PackingParams)
    rate: float = 1.0
    lambda_estimate: int = 0


def _spanning_tree(n, a, b, weights) -> np.ndarray:
    """Edge indices of a minimum spanning tree (all weights > 0)."""
    mat = coo_matrix((weights, (a, b)), shape=(n, n)).tocsr()
    mst = minimum_spanning_tree(mat).tocoo()
    lo = np.minimum(mst.row, mst.col)
    hi = np.maximum(mst.row, mst.col)
    keys = a * n + b
    return np.searchsorted(keys, lo.astype(np.int64) * n + hi)


def _min_one_respecting(n, a, b, w, tree_idx, root) -> int:
    tree = build_rooted(n, np.stack([a[tree_idx], b[tree_idx]], axis=1), root)
    lca = Lca(tree)(a, b)
    deg = np.zeros(n, dtype=np.int64)
    np.add.at(deg, a, w)
    np.add.at(deg, b, w)
    at = np.zeros(n, dtype=np.int64)
    np.add.at(at, lca, w)
    cut = subtree_sums(tree, deg) - 2 * subtree_sums(tree, at)
    return int(cut[tree.order[1:]].min())


def estimate_min_cut(g: Graph, root: int = 0) -> int:
    """Upper bound on the minimum cut value from a maximum-weight spanning
    tree's 1-respecting cuts and the minimum weighted degree."""
    h = g.merged()
    a, b, w = h.src, h.dst, h.weight
    if len(w) == 0:
        return 0
    big = int(w.max()) + 1
    idx = _spanning_tree(g.n, a, b, (big - w).astype(np.float64))
    return min(int(g.degrees.min()), _min_one_respecting(g.n, a, b, w, idx, root))


def pack_trees(g: Graph, cfg: TieBreakConfig, seed: int = 0,
               params: PackingParams | None = None) -> Packing:
    params = params or PackingParams()
    if not g.is_connected():
        raise ConnectivityError("tree packing needs a connected graph")
    if g.n == 1:
        return Packing([], seed, params)
    h = g.merged()
    a, b, w = h.src, h.dst, h.weight
    n = g.n
    edges_of = lambda idx: np.stack([a[idx], b[idx]], axis=1)  # noqa: E731
    if len(w) == n - 1:
        return Packing([build_rooted(n, edges_of(np.arange(n - 1)), cfg.s)], seed, params)

    rng = np.random.default_rng(seed)
    lam = estimate_min_cut(g, cfg.s)
    ln_n = math.log(max(n, 2))
    if params.sample_rate is not None:
        rate = min(1.0, params.sample_rate)
    else:
        rate = min(1.0, params.sample_c * ln_n / max(lam, 1))
    mult = w.copy() if rate >= 1.0 else rng.binomial(w, rate).astype(np.int64)

    count = math.ceil(params.trees_c * ln_n)
    load = np.zeros(len(w), dtype=np.float64)
    # edges missing from the skeleton are used only to reconnect it
    fallback = float(count + 2) * 4.0
    trees, seen = [], set()
    for _ in range(count):
        jitter = 1.0 + 1e-6 * rng.random(len(w))
        with np.errstate(divide="ignore"):
            rel = np.where(mult > 0, (load + 1.0) / np.maximum(mult, 1), fallback + load)
        idx = _spanning_tree(n, a, b, rel * jitter)
        load[idx] += 1.0
        tree = build_rooted(n, edges_of(idx), cfg.s)
        if tree.key() not in seen:
            seen.add(tree.key())
            trees.append(tree)
    return Packing(trees, seed, params, rate, lam)


def respects_count(tree: RootedTree, side) -> int:
    """Number of tree edges with exactly one endpoint in ``side``."""
    inside = np.zeros(tree.n, dtype=bool)
    inside[list(side)] = True
    child = tree.order[1:]
    return int(np.count_nonzero(inside[child] != inside[tree.parent[child]]))
