import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from canoncut.errors import DomainError, StructureError
from canoncut.linkcut import (LinkCutTree, lct_add, lct_build, lct_subtree_min, pair_build,
                              pair_min, pair_path_add)
from canoncut.trees import build_rooted

from conftest import random_tree_edges
from naive import NaiveTree


def chain(n):
    return build_rooted(n, [(i, i + 1) for i in range(n - 1)], n - 1)


class TestBasics:
    def test_single_vertex(self):
        t = lct_build(build_rooted(1, [], 0), [(4, 5, 6)])
        assert lct_subtree_min(t, 0) == (0, (4, 5, 6))

    def test_chain_min(self):
        t = lct_build(chain(3), [(3, 0, 0), (1, 0, 0), (2, 0, 0)])
        assert lct_subtree_min(t, 2) == (1, (1, 0, 0))

    def test_add_at_root_changes_root_only(self):
        t = lct_build(chain(3), np.zeros((3, 3)))
        lct_add(t, 2, (5, 0, 0))
        assert t.costs().tolist() == [[0, 0, 0], [0, 0, 0], [5, 0, 0]]

    def test_add_at_leaf_changes_path(self):
        t = lct_build(chain(3), np.zeros((3, 3)))
        lct_add(t, 0, (1, -1, 2))
        assert t.costs().tolist() == [[1, -1, 2]] * 3

    def test_leaf_query(self):
        t = lct_build(chain(3), [(3, 0, 0), (1, 0, 0), (2, 0, 0)])
        assert lct_subtree_min(t, 0) == (0, (3, 0, 0))

    def test_leaf_wins_after_decrease(self):
        t = lct_build(chain(4), np.zeros((4, 3)))
        lct_add(t, 0, (-10, 0, 0))
        lct_add(t, 1, (10, 0, 0))
        assert lct_subtree_min(t, 3) == (0, (-10, 0, 0))

    def test_lexicographic_components(self):
        t = lct_build(build_rooted(3, [(0, 2), (1, 2)], 2), [(1, 5, 0), (1, 4, 9), (2, 0, 0)])
        assert lct_subtree_min(t, 2) == (1, (1, 4, 9))

    def test_ties_go_to_first_preorder_position(self):
        tree = build_rooted(4, [(0, 3), (1, 3), (2, 1)], 3)
        t = LinkCutTree(tree, np.zeros((4, 3)))
        v, _ = t.subtree_min(3)
        assert v == 3
        v, _ = t.subtree_min(3, proper=True)
        assert tree.euler_first[v] == 1

    def test_proper_leaf_is_empty(self):
        t = LinkCutTree(chain(2), np.zeros((2, 3)))
        assert t.subtree_min(0, proper=True) is None

    def test_errors(self):
        with pytest.raises(StructureError):
            LinkCutTree(chain(3), np.zeros((2, 3)))
        t = LinkCutTree(chain(3), np.zeros((3, 3)))
        with pytest.raises(DomainError):
            t.add(3, (1, 0, 0))
        with pytest.raises(DomainError):
            t.subtree_min(-1)


@given(st.integers(1, 80), st.integers(0, 2**32 - 1))
def test_random_trace_matches_mirror(n, seed):
    rng = np.random.default_rng(seed)
    tree = build_rooted(n, random_tree_edges(rng, n), int(rng.integers(n)))
    init = rng.integers(-3, 4, size=(n, 3))
    fast, slow = LinkCutTree(tree, init), NaiveTree(tree, init)
    for _ in range(200):
        u = int(rng.integers(n))
        if rng.random() < 0.5:
            d = tuple(int(x) for x in rng.integers(-2, 3, size=3))
            fast.add(u, d)
            slow.add(u, d)
        else:
            proper = bool(rng.random() < 0.3)
            assert fast.subtree_min(u, proper) == slow.subtree_min(u, proper)
    assert np.array_equal(fast.costs(), slow.costs)


@given(st.integers(2, 60), st.integers(0, 2**32 - 1))
def test_paired_rows_match_two_mirrors(n, seed):
    """Paired tree: shared value deltas, private column-1 deltas on row B,
    and path updates that stop below a given ancestor."""
    rng = np.random.default_rng(seed)
    tree = build_rooted(n, random_tree_edges(rng, n), int(rng.integers(n)))
    val = rng.integers(-3, 4, size=n)
    rows_a = np.stack([val, rng.integers(-3, 4, size=n), rng.integers(-3, 4, size=n)], axis=1)
    rows_b = np.stack([val, rng.integers(-3, 4, size=n), rng.integers(-3, 4, size=n)], axis=1)
    a, b = NaiveTree(tree, rows_a), NaiveTree(tree, rows_b)
    t, d = pair_build(np.ascontiguousarray(rows_a[tree.order]),
                      np.ascontiguousarray(rows_b[tree.order]))
    size = len(d)
    height = size.bit_length() - 1
    out = np.empty(4, dtype=np.int64)
    par = tree.parent_or_none
    for _ in range(150):
        u = int(rng.integers(n))
        op = rng.random()
        if op < 0.5:
            anc = [u]
            while anc[-1] != tree.root:
                anc.append(int(tree.parent[anc[-1]]))
            top = -1 if rng.random() < 0.3 else anc[int(rng.integers(len(anc)))]
            dv, db = (int(x) for x in rng.integers(-2, 3, size=2))
            for x in (anc if top < 0 else anc[:anc.index(top)]):
                a.costs[x, 0] += dv
                b.costs[x, 0] += dv
                b.costs[x, 1] += db
            pair_path_add(t, d, size, tree.euler_first, tree.head, par, u, top, dv, db)
        else:
            lo, hi = int(tree.euler_first[u]), int(tree.euler_last[u])
            for mirror, o in ((a, 0), (b, 4)):
                pair_min(t, d, size, height, lo, hi, o, out)
                v, cost = mirror.subtree_min(u)
                assert (int(tree.order[out[3]]), tuple(out[:3].tolist())) == (v, cost)
