"""Weighted undirected graphs, the tie-breaking context and cut tuples.

Every cut is scored by the triple ``(value, ln, priority)``:

* ``value``    total weight of edges crossing the cut,
* ``ln``       smallest ordering label ``h`` on the side without the source,
* ``priority`` sum of vertex priorities on the side without the source.

Triples compare lexicographically, so plain tuple comparison is the order.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import GraphFormatError, InvalidCutError, StructureError

log = logging.getLogger(__name__)

INT64_MAX = (1 << 63) - 1

CutSide = frozenset


class CutTuple(NamedTuple):
    value: int
    ln: int
    priority: int


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected multigraph on vertices ``0..n-1`` with integer weights.

    Edge endpoints and weights live in three parallel read-only int64
    arrays. Parallel edges are allowed, self-loops are not.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        for name in ("src", "dst", "weight"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.n < 1:
            raise StructureError("graph needs at least one vertex")
        if not (len(self.src) == len(self.dst) == len(self.weight)):
            raise StructureError("edge arrays differ in length")
        if len(self.src):
            lo = min(self.src.min(), self.dst.min())
            hi = max(self.src.max(), self.dst.max())
            if lo < 0 or hi >= self.n:
                raise StructureError(f"edge endpoint out of range 0..{self.n - 1}")
            if np.any(self.src == self.dst):
                raise StructureError("self-loops are not allowed")
            if self.weight.min() < 0:
                raise StructureError("edge weights must be non-negative")
            if sum(int(w) for w in self.weight) > INT64_MAX:
                raise StructureError("total edge weight exceeds 64 bits")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        rows = [tuple(int(x) for x in e) for e in edges]
        for e in rows:
            if len(e) not in (2, 3):
                raise StructureError(f"edge {e!r} must be (u, v) or (u, v, w)")
        src = [e[0] for e in rows]
        dst = [e[1] for e in rows]
        w = [e[2] if len(e) == 3 else 1 for e in rows]
        return cls(n, np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64),
                   np.array(w, dtype=np.int64))

    @property
    def m(self) -> int:
        return len(self.src)

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()))

    @cached_property
    def degrees(self) -> np.ndarray:
        """Weighted degree of every vertex."""
        deg = np.zeros(self.n, dtype=np.int64)
        np.add.at(deg, self.src, self.weight)
        np.add.at(deg, self.dst, self.weight)
        return deg

    def merged(self) -> "Graph":
        """Same graph with parallel edges summed and zero-weight edges dropped."""
        a = np.minimum(self.src, self.dst)
        b = np.maximum(self.src, self.dst)
        keep = self.weight > 0
        key = a[keep] * self.n + b[keep]
        uniq, inv = np.unique(key, return_inverse=True)
        w = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(w, inv, self.weight[keep])
        return Graph(self.n, uniq // self.n, uniq % self.n, w)

    def positive_components(self) -> np.ndarray:
        """Component label per vertex, using only edges of positive weight."""
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        keep = self.weight > 0
        mat = coo_matrix((np.ones(int(keep.sum())), (self.src[keep], self.dst[keep])),
                         shape=(self.n, self.n))
        _, labels = connected_components(mat, directed=False)
        return labels

    def is_connected(self) -> bool:
        return self.n == 1 or int(self.positive_components().max()) == 0


@dataclass(frozen=True, eq=False)
class TieBreakConfig:
    """Source vertex ``s``, ordering ``h`` and vertex priorities ``P``.

    ``h[s]`` is stored as 0 and means "no label"; every other vertex gets a
    distinct label in ``1..n-1``.
    """

    s: int
    h: np.ndarray
    priority: np.ndarray

    def __post_init__(self):
        h = np.ascontiguousarray(self.h, dtype=np.int64)
        p = np.ascontiguousarray(self.priority, dtype=np.int64)
        h.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "priority", p)
        n = len(h)
        if len(p) != n:
            raise StructureError("h and priority arrays differ in length")
        if not 0 <= self.s < n:
            raise StructureError("source vertex out of range")
        if h[self.s] != 0:
            raise StructureError("the source vertex carries no h label (store 0)")
        rest = np.delete(h, self.s)
        if not np.array_equal(np.sort(rest), np.arange(1, n)):
            raise StructureError("h must be a bijection from V \\ {s} onto 1..n-1")
        if n and p.min() < 1:
            raise StructureError("priorities must be positive")
        if sum(int(x) for x in p) > INT64_MAX:
            raise StructureError("total priority exceeds 64 bits")

    @property
    def n(self) -> int:
        return len(self.h)

    @classmethod
    def default(cls, n: int) -> "TieBreakConfig":
        """Source ``n-1``, ``h(v) = v + 1`` for the rest, unit priorities."""
        h = np.arange(1, n + 1, dtype=np.int64)
        h[n - 1] = 0
        return cls(n - 1, h, np.ones(n, dtype=np.int64))

    @classmethod
    def with_source(cls, n: int, s: int, priority=None) -> "TieBreakConfig":
        """Source ``s``; the other vertices are labelled in id order."""
        h = np.zeros(n, dtype=np.int64)
        others = [v for v in range(n) if v != s]
        h[others] = np.arange(1, n)
        p = np.ones(n, dtype=np.int64) if priority is None else priority
        return cls(s, h, p)

    def by_h(self) -> np.ndarray:
        """Non-source vertices ordered by their label."""
        order = np.argsort(self.h, kind="stable")
        return order[1:]


def _check_side(n: int, side: Iterable[int]) -> frozenset:
    members = frozenset(int(x) for x in side)
    if not members:
        raise InvalidCutError("cut side is empty")
    if len(members) >= n:
        raise InvalidCutError("cut side covers every vertex")
    if min(members) < 0 or max(members) >= n:
        raise InvalidCutError("cut side names an unknown vertex")
    return members


def normalize_side(cfg: TieBreakConfig, side: Iterable[int]) -> frozenset:
    """The side of the cut that does not contain the source."""
    members = _check_side(cfg.n, side)
    if cfg.s in members:
        return frozenset(range(cfg.n)) - members
    return members


def cut_value(g: Graph, side: Iterable[int]) -> int:
    members = _check_side(g.n, side)
    mask = np.zeros(g.n, dtype=bool)
    mask[list(members)] = True
    crossing = mask[g.src] != mask[g.dst]
    return int(g.weight[crossing].sum())


def lex_number(cfg: TieBreakConfig, side: Iterable[int]) -> int:
    far = normalize_side(cfg, side)
    return int(min(cfg.h[v] for v in far))


def total_priority(cfg: TieBreakConfig, side: Iterable[int]) -> int:
    far = normalize_side(cfg, side)
    total = sum(int(cfg.priority[v]) for v in far)
    if total > INT64_MAX:
        raise OverflowError("priority sum exceeds 64 bits")
    return total


def lex_tuple(g: Graph, cfg: TieBreakConfig, side: Iterable[int]) -> CutTuple:
    side = _check_side(g.n, side)
    return CutTuple(cut_value(g, side), lex_number(cfg, side), total_priority(cfg, side))


def compare_tuples(t1: Sequence[int], t2: Sequence[int]) -> int:
    """-1, 0 or 1 as ``t1`` is lexicographically smaller, equal or larger."""
    a, b = tuple(t1), tuple(t2)
    return (a > b) - (a < b)


def side_sort_key(cfg: TieBreakConfig, side: Iterable[int]) -> list[int]:
    """Members of ``side`` listed in increasing ``h``."""
    return sorted(side, key=lambda v: int(cfg.h[v]))


def cut_json(cfg: TieBreakConfig, side: Iterable[int], t: CutTuple) -> str:
    payload = {"value": int(t.value), "ln": int(t.ln), "priority": int(t.priority),
               "side": [int(v) for v in side_sort_key(cfg, side)]}
    return json.dumps(payload, separators=(",", ":"))


# --- text format -----------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the ``p n m`` / ``e u v w`` line format (``c`` lines are comments)."""
    n = m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate header")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: header must be 'p <n> <m>'")
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer header") from None
            if n < 1 or m < 0:
                raise GraphFormatError(f"line {lineno}: bad header counts")
        elif parts[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before header")
            if len(parts) != 4:
                raise GraphFormatError(f"line {lineno}: edge must be 'e <u> <v> <w>'")
            try:
                u, v, w = (int(x) for x in parts[1:])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer edge field") from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"line {lineno}: endpoint out of range")
            if w < 0:
                raise GraphFormatError(f"line {lineno}: negative weight")
            edges.append((u, v, w))
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphFormatError("missing 'p <n> <m>' header")
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")
    loops = [e for e in edges if e[0] == e[1]]
    if loops:
        log.warning("dropping %d self-loop(s)", len(loops))
        edges = [e for e in edges if e[0] != e[1]]
    try:
        return Graph.from_edges(n, edges)
    except StructureError as exc:
        raise GraphFormatError(str(exc)) from None


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def format_graph(g: Graph, comment: str | None = None) -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p {g.n} {g.m}")
    lines.extend(f"e {u} {v} {w}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"
