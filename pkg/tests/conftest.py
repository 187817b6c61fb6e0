import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from canoncut.graph import Graph, TieBreakConfig
from canoncut.trees import build_rooted

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, n_min=2, n_max=9, connected=True, wmax=8, zero=False):
    """Random multigraph; connected graphs get a random spanning tree first."""
    n = draw(st.integers(n_min, n_max))
    edges = []
    if connected:
        for v in range(1, n):
            edges.append((v, draw(st.integers(0, v - 1)), draw(st.integers(1, wmax))))
    extra = draw(st.integers(0, n * (n - 1) // 2))
    lo = 0 if zero else 1
    for _ in range(extra):
        a = draw(st.integers(0, n - 1))
        b = draw(st.integers(0, n - 1))
        if a != b:
            edges.append((a, b, draw(st.integers(lo, wmax))))
    return Graph.from_edges(n, edges)


@st.composite
def graph_and_tree(draw, n_min=2, n_max=9):
    g = draw(graphs(n_min, n_max))
    perm = draw(st.permutations(range(g.n)))
    tree_edges = [(perm[i], perm[draw(st.integers(0, i - 1))]) for i in range(1, g.n)]
    cfg = TieBreakConfig.default(g.n)
    return g, build_rooted(g, tree_edges, cfg.s), cfg


@st.composite
def sides(draw, n):
    """Nonempty proper subset of range(n)."""
    members = draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n - 1))
    return frozenset(members)


def cycle(n, w=1):
    return Graph.from_edges(n, [(i, (i + 1) % n, w) for i in range(n)])


def path(n, w=1):
    return Graph.from_edges(n, [(i, i + 1, w) for i in range(n - 1)])


def random_tree_edges(rng, n):
    perm = rng.permutation(n)
    return [(int(perm[i]), int(perm[rng.integers(i)])) for i in range(1, n)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria (slow)")
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(config.acceptance_lines):
            terminalreporter.write_line(line)
