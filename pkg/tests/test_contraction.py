import threading

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from canoncut.contraction import (CutQueryOracle, contract, contracted_tuple, cut_query,
                                  exact_nmc_provider, identity_provider, karger_half_provider,
                                  karger_providers, meta_select, min_degree_vertex,
                                  tuple_consistency_check)
from canoncut.errors import CapacityError, DomainError, InvalidCutError, StructureError
from canoncut.graph import Graph, TieBreakConfig, cut_value, lex_tuple
from canoncut.oracle import oracle_lex_first

from conftest import cycle, graphs, sides


def two_triangles():
    return Graph.from_edges(6, [(0, 1, 2), (1, 2, 2), (0, 2, 2),
                                (3, 4, 2), (4, 5, 2), (3, 5, 2), (2, 3, 1)])


def k4():
    return Graph.from_edges(4, [(a, b, 1) for a in range(4) for b in range(a + 1, 4)])


@st.composite
def partitions(draw, n):
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return np.array(labels)


class TestContract:
    def test_identity(self):
        g = cycle(5)
        c = identity_provider(g, TieBreakConfig.default(5))
        assert c.n == 5 and c.contracted.edges == g.merged().edges
        assert c.cfg.h.tolist() == TieBreakConfig.default(5).h.tolist()

    def test_all_but_one(self):
        g = two_triangles()
        v = 2
        c = contract(g, [[v], [x for x in range(6) if x != v]])
        assert c.n == 2
        assert c.contracted.edges == [(0, 1, cut_value(g, {v}))]

    def test_not_a_partition(self):
        g = cycle(4)
        for groups in ([[0, 1], [1, 2, 3]], [[0, 1], [2]], [[0, 1, 2, 3], []]):
            with pytest.raises(StructureError):
                contract(g, groups)

    def test_labels_inherit(self):
        g = cycle(6)
        cfg = TieBreakConfig.with_source(6, 2, [1, 2, 3, 4, 5, 6])
        c = contract(g, [[4, 5], [2, 0], [1, 3]], cfg)
        # classes sorted by smallest member: {0,2}, {1,3}, {4,5}
        assert c.cfg.s == 0
        assert c.cfg.priority.tolist() == [4, 6, 11]
        assert c.h_inherited.tolist() == [0, int(cfg.h[1]), int(cfg.h[4])]
        assert c.cfg.h.tolist() == [0, 1, 2]

    @given(graphs(n_max=9, zero=True), st.data())
    def test_weights_sum_between_classes(self, g, data):
        c = contract(g, data.draw(partitions(g.n)))
        for a, b, w in c.contracted.edges:
            want = sum(x for u, v, x in g.edges
                       if {int(c.label[u]), int(c.label[v])} == {a, b})
            assert w == want

    @given(graphs(n_max=9), st.data())
    def test_tuples_match_expansion(self, g, data):
        pri = data.draw(st.lists(st.integers(1, 4), min_size=g.n, max_size=g.n))
        cfg = TieBreakConfig.with_source(g.n, data.draw(st.integers(0, g.n - 1)), pri)
        c = contract(g, data.draw(partitions(g.n)), cfg)
        if c.n < 2:
            return
        side = data.draw(sides(c.n))
        assert tuple_consistency_check(c, side)
        assert cut_value(c.contracted, side) == cut_value(g, c.expand(side))

    def test_bad_contracted_side(self):
        c = identity_provider(cycle(3), TieBreakConfig.default(3))
        for side in ([], [0, 1, 2], [5]):
            with pytest.raises(InvalidCutError):
                contracted_tuple(c, side)


class TestQueries:
    def test_singleton_is_degree(self):
        g = two_triangles()
        q = CutQueryOracle(g)
        assert [cut_query(q, [v]) for v in range(6)] == g.degrees.tolist()
        assert q.queries == 6

    def test_complement(self):
        q = CutQueryOracle(two_triangles())
        assert q.query({0, 1, 2}) == q.query({3, 4, 5}) == 1

    def test_contracted_query(self):
        g = two_triangles()
        c = contract(g, [[0, 1, 2], [3, 4, 5]])
        q = CutQueryOracle(g)
        assert q.query_contracted(c, [0]) == 1 and q.queries == 1

    def test_invalid_side_not_counted(self):
        q = CutQueryOracle(cycle(3))
        with pytest.raises(InvalidCutError):
            q.query([0, 1, 2])
        assert q.queries == 0

    def test_counter_is_thread_safe(self):
        q = CutQueryOracle(cycle(8))

        def work():
            for _ in range(200):
                q.query([1])

        threads = [threading.Thread(target=work) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert q.queries == 1600


class TestMinDegree:
    def test_cycle(self):
        assert min_degree_vertex(cycle(4), TieBreakConfig.default(4)) == 0

    def test_source_singleton(self):
        # leaf 2 is the source; its singleton ties leaf 1 on degree but
        # its far side holds the h-first vertex 0
        g = Graph.from_edges(3, [(0, 1, 1), (0, 2, 1)])
        assert min_degree_vertex(g, TieBreakConfig.default(3)) == 2

    def test_star_leaf(self):
        g = Graph.from_edges(5, [(0, v, 1) for v in range(1, 5)])
        cfg = TieBreakConfig.with_source(5, 0)
        assert min_degree_vertex(g, cfg) == int(np.argmin(np.where(np.arange(5) == 0, 99, cfg.h)))

    @given(graphs(n_max=9), st.data())
    def test_best_singleton(self, g, data):
        pri = data.draw(st.lists(st.integers(1, 4), min_size=g.n, max_size=g.n))
        cfg = TieBreakConfig.with_source(g.n, data.draw(st.integers(0, g.n - 1)), pri)
        v = min_degree_vertex(g, cfg)
        assert lex_tuple(g, cfg, [v]) == min(lex_tuple(g, cfg, [x]) for x in range(g.n))

    def test_query_cost(self):
        g = two_triangles()
        q = CutQueryOracle(g)
        cfg = TieBreakConfig.default(6)
        assert min_degree_vertex(q, cfg) == min_degree_vertex(g, cfg)
        assert q.queries == 6

    def test_too_small(self):
        with pytest.raises(DomainError):
            min_degree_vertex(Graph.from_edges(1, []), TieBreakConfig.default(1))


class TestProviders:
    def test_exact_on_cycle_keeps_everything(self):
        c = exact_nmc_provider(cycle(5), TieBreakConfig.default(5))
        assert c.n == 5

    def test_exact_on_two_triangles(self):
        c = exact_nmc_provider(two_triangles(), TieBreakConfig.default(6))
        assert c.n == 2 and c.groups == [frozenset({0, 1, 2}), frozenset({3, 4, 5})]

    def test_exact_on_k4_collapses(self):
        assert exact_nmc_provider(k4(), TieBreakConfig.default(4)).n == 1

    def test_exact_capacity(self):
        with pytest.raises(CapacityError):
            exact_nmc_provider(cycle(21), TieBreakConfig.default(21))

    def test_karger_small(self):
        c = karger_half_provider(cycle(4), 0)
        assert c.n == 2
        with pytest.raises(DomainError):
            karger_half_provider(cycle(3), 0)

    @given(graphs(n_min=4, n_max=12), st.integers(0, 2**32))
    def test_karger_is_a_valid_half(self, g, seed):
        c = karger_half_provider(g, seed)
        assert c.n == -(-g.n // 2)
        assert sorted(x for grp in c.groups for x in grp) == list(range(g.n))
        for grp in c.groups:
            sub = Graph.from_edges(g.n, [(u, v, w) for u, v, w in g.edges if u in grp and v in grp])
            labels = sub.positive_components()
            assert len({int(labels[x]) for x in grp}) == 1

    def test_karger_threads_keep_order(self):
        g = two_triangles()
        a = karger_providers(g, 6, 9)
        b = karger_providers(g, 6, 9, threads=3)
        assert [c.groups for c in a] == [c.groups for c in b]


class TestMetaSelect:
    @given(graphs(n_max=9))
    def test_identity_matches_oracle(self, g):
        cfg = TieBreakConfig.default(g.n)
        res = meta_select(g, [identity_provider(g, cfg)], None, cfg)
        o = oracle_lex_first(g, cfg)
        assert res.side == o.side and res.tuple == o.tuple

    def test_trivial_candidate_wins_when_everything_collapses(self):
        g = k4()
        cfg = TieBreakConfig.default(4)
        q = CutQueryOracle(g)
        v = min_degree_vertex(q, cfg)
        res = meta_select(g, [exact_nmc_provider(g, cfg)], v, cfg, oracle=q)
        assert res.side == oracle_lex_first(g, cfg).side == {0}
        assert res.diagnostics["source"] == "trivial"
        assert q.queries == 5

    @given(graphs(n_min=2, n_max=9))
    def test_exact_with_trivial_matches_oracle(self, g):
        cfg = TieBreakConfig.default(g.n)
        q = CutQueryOracle(g)
        res = meta_select(g, [exact_nmc_provider(g, cfg)], min_degree_vertex(q, cfg), cfg, oracle=q)
        o = oracle_lex_first(g, cfg)
        assert res.side == o.side and res.tuple == o.tuple
        assert res.tuple == lex_tuple(g, cfg, res.side)

    def test_empty(self):
        with pytest.raises(DomainError):
            meta_select(cycle(4), [], None, TieBreakConfig.default(4))

    def test_kappa(self):
        g = two_triangles()
        cfg = TieBreakConfig.default(6)
        res = meta_select(g, [identity_provider(g, cfg), exact_nmc_provider(g, cfg)], None, cfg)
        assert res.diagnostics["kappa"] == g.merged().m
        assert res.diagnostics["candidates"] == 2
