import pytest
from hypothesis import given
from hypothesis import strategies as st

from canoncut.errors import ConfigError, DomainError
from canoncut.generators import corpus
from canoncut.graph import Graph, TieBreakConfig, lex_tuple
from canoncut.oracle import oracle_lex_first
from canoncut.packing import PackingParams
from canoncut.solver import SolveParams, canonical_min_cut, components_fallback, result_key

from conftest import cycle, graphs


def test_k2():
    res = canonical_min_cut(Graph.from_edges(2, [(0, 1, 7)]))
    assert res.side == {0} and res.tuple == (7, 1, 1)


def test_four_cycle():
    res = canonical_min_cut(cycle(4))
    assert res.side == {0} and res.tuple == (2, 1, 1)


def test_two_isolated_vertices():
    res = canonical_min_cut(Graph.from_edges(2, []))
    assert res.side == {0} and res.tuple == (0, 1, 1)
    assert res.diagnostics["case"] == "components"


def test_three_components():
    g = Graph.from_edges(6, [(0, 1, 2), (2, 3, 1), (4, 5, 9)])
    cfg = TieBreakConfig.with_source(6, 4)
    res = canonical_min_cut(g, cfg)
    assert res.side == {0, 1} and res.tuple == (0, 1, 2)


def test_zero_weight_edges_disconnect():
    g = Graph.from_edges(3, [(0, 1, 0), (1, 2, 3)])
    res = canonical_min_cut(g)
    assert res.side == {0} and res.tuple.value == 0


@given(graphs(n_max=9, connected=False, zero=True))
def test_possibly_disconnected_against_oracle(g):
    cfg = TieBreakConfig.default(g.n)
    res = canonical_min_cut(g, cfg, SolveParams(amplify=4))
    o = oracle_lex_first(g, cfg)
    assert lex_tuple(g, cfg, res.side) == res.tuple
    if not g.is_connected():
        assert res.side == o.side and res.tuple == o.tuple


def test_too_small():
    with pytest.raises(DomainError):
        canonical_min_cut(Graph.from_edges(1, []))


def test_fallback_needs_disconnected():
    with pytest.raises(DomainError):
        components_fallback(cycle(3), TieBreakConfig.default(3))


@pytest.mark.parametrize("kw", [{"amplify": 0}, {"engine": "nope"},
                                {"packing": PackingParams(trees_c=0)}])
def test_bad_params(kw):
    with pytest.raises(ConfigError):
        SolveParams(**kw)


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("CANONCUT_THREADS", "many")
    with pytest.raises(ConfigError):
        canonical_min_cut(cycle(4))


@given(graphs(n_max=10), st.integers(0, 2**32))
def test_valid_and_usually_exact(g, seed):
    cfg = TieBreakConfig.default(g.n)
    res = canonical_min_cut(g, cfg, SolveParams(seed=seed))
    assert cfg.s not in res.side and 0 < len(res.side) < g.n
    assert lex_tuple(g, cfg, res.side) == res.tuple
    assert res.tuple >= oracle_lex_first(g, cfg).tuple


def test_same_answer_across_seeds():
    for g in corpus(30, 4):
        cfg = TieBreakConfig.default(g.n)
        answers = {(res.side, res.tuple) for res in
                   (canonical_min_cut(g, cfg, SolveParams(seed=s)) for s in range(5))}
        o = oracle_lex_first(g, cfg)
        assert answers == {(o.side, o.tuple)}


def test_amplification_never_hurts():
    for g in corpus(20, 11):
        cfg = TieBreakConfig.default(g.n)
        keys = [result_key(cfg, canonical_min_cut(g, cfg, SolveParams(seed=3, amplify=a)))
                for a in (1, 2, 4, 8)]
        assert keys == sorted(keys, reverse=True)


def test_threads_give_identical_output(monkeypatch):
    graphs_ = corpus(15, 21, n_lo=8, n_hi=20)
    serial = [result_key(TieBreakConfig.default(g.n), canonical_min_cut(g)) for g in graphs_]
    monkeypatch.setenv("CANONCUT_THREADS", "4")
    threaded = [result_key(TieBreakConfig.default(g.n), canonical_min_cut(g)) for g in graphs_]
    assert serial == threaded


def test_diagnostics():
    res = canonical_min_cut(cycle(6), params=SolveParams(amplify=2))
    assert res.diagnostics["trees"] >= 1
    assert res.diagnostics["case"] in {"one", "descendant", "independent"}
    assert res.diagnostics["wall_time"] >= 0
