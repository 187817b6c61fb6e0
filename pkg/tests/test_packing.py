import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from canoncut.errors import ConnectivityError
from canoncut.generators import corpus
from canoncut.graph import Graph, TieBreakConfig, cut_value
from canoncut.oracle import oracle_lex_first
from canoncut.packing import (PackingParams, derive_seed, estimate_min_cut, pack_trees,
                              respects_count)
from canoncut.trees import build_rooted

from conftest import cycle, graphs, path, sides


def naive_respects(tree, side):
    return sum((v in side) != (int(tree.parent[v]) in side) for v in range(tree.n) if v != tree.root)


class TestRespectsCount:
    @given(graphs(n_max=10), st.data())
    def test_down_sets_cross_once(self, g, data):
        tree = pack_trees(g, TieBreakConfig.default(g.n), data.draw(st.integers(0, 99))).trees[0]
        for v in range(g.n):
            if v != tree.root:
                assert respects_count(tree, tree.descendants(v)) == 1

    def test_descendant_difference_crosses_twice(self):
        tree = build_rooted(4, [(0, 1), (1, 2), (2, 3)], 3)
        assert respects_count(tree, tree.descendants(1) - tree.descendants(0)) == 2

    @given(graphs(n_max=10), st.data())
    def test_against_edge_scan(self, g, data):
        tree = pack_trees(g, TieBreakConfig.default(g.n), 0).trees[0]
        s = data.draw(sides(g.n))
        assert respects_count(tree, s) == naive_respects(tree, s)


class TestPackTrees:
    def test_tree_input_is_its_own_packing(self):
        g = path(5)
        p = pack_trees(g, TieBreakConfig.default(5), 3)
        assert len(p.trees) == 1
        assert sorted(map(sorted, p.trees[0].edges)) == [[0, 1], [1, 2], [2, 3], [3, 4]]

    def test_cycle_cuts_two_respect_every_tree(self):
        g = cycle(4)
        cfg = TieBreakConfig.default(4)
        side = oracle_lex_first(g, cfg).side
        for seed in range(10):
            assert all(respects_count(t, side) <= 2 for t in pack_trees(g, cfg, seed).trees)

    def test_disconnected(self):
        with pytest.raises(ConnectivityError):
            pack_trees(Graph.from_edges(3, [(0, 1, 1)]), TieBreakConfig.default(3))

    @given(graphs(n_max=12), st.integers(0, 2**63))
    def test_shape_and_determinism(self, g, seed):
        cfg = TieBreakConfig.default(g.n)
        params = PackingParams(trees_c=2.0)
        p = pack_trees(g, cfg, seed, params)
        q = pack_trees(g, cfg, seed, params)
        assert [t.key() for t in p.trees] == [t.key() for t in q.trees]
        assert 1 <= len(p.trees) <= math.ceil(2.0 * math.log(g.n)) + 1
        edges = {(min(u, v), max(u, v)) for u, v, w in g.edges if w > 0}
        for t in p.trees:
            assert t.root == cfg.s
            assert all((min(a, b), max(a, b)) in edges for a, b in t.edges)
        assert len({t.key() for t in p.trees}) == len(p.trees)

    def test_heavy_weights_are_sampled(self):
        rng = np.random.default_rng(1)
        g = corpus(1, 5, n_lo=10, n_hi=10, wmax=1)[0]
        heavy = Graph(g.n, g.src, g.dst, g.weight * 1000)
        p = pack_trees(heavy, TieBreakConfig.default(g.n), int(rng.integers(1 << 32)))
        lam = oracle_lex_first(heavy, TieBreakConfig.default(g.n)).tuple.value
        assert p.rate < 1.0
        assert lam <= p.lambda_estimate <= int(heavy.degrees.min())

    @given(graphs(n_max=10))
    def test_estimate_bounds_min_cut(self, g):
        lam = oracle_lex_first(g, TieBreakConfig.default(g.n)).tuple.value
        est = estimate_min_cut(g)
        assert lam <= est <= int(g.degrees.min())


def test_seed_derivation():
    assert derive_seed(0, 0) == 0x9E3779B97F4A7C15
    assert derive_seed(5, 1) == (5 ^ (2 * 0x9E3779B97F4A7C15)) % 2**64
    assert len({derive_seed(7, i) for i in range(100)}) == 100


def test_coverage_on_small_corpus():
    hits = 0
    graphs_ = corpus(60, 99)
    for i, g in enumerate(graphs_):
        cfg = TieBreakConfig.default(g.n)
        side = oracle_lex_first(g, cfg).side
        hits += any(respects_count(t, side) <= 2 for t in pack_trees(g, cfg, i).trees)
        assert cut_value(g, side) >= 0
    assert hits / len(graphs_) >= 0.95
