"""Undirected simple graph with external labels, loading, and structure queries.

Internal node ids are dense integers ``0..n-1`` assigned in first-seen order;
external labels are arbitrary strings. All algorithms in the package operate
on these graphs or on induced subgraphs of them.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import IO, Iterable, Iterator

import numpy as np
from numba import njit
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .errors import InvalidArgumentError, ParseError


class Graph:
    """Immutable undirected simple graph in CSR form.

    Invariants: no self-loops, no parallel edges, neighbor lists sorted,
    adjacency symmetric. Safe for concurrent reads.
    """

    __slots__ = ("indptr", "indices", "labels", "_label_to_id")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, labels: tuple[str, ...]):
        self.indptr = indptr
        self.indices = indices
        self.labels = labels
        self._label_to_id = {lab: i for i, lab in enumerate(labels)}

    @classmethod
    def from_edge_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "Graph":
        """Build a graph from labeled edge pairs, dropping loops and duplicates."""
        g, _ = _build(pairs)
        return g

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v

    def label_of(self, v: int) -> str:
        return self.labels[v]

    def id_of(self, label: str) -> int:
        return self._label_to_id[label]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each edge once as (u, v) with u < v by internal id."""
        for u in range(self.node_count):
            for v in self.neighbors(u):
                if u < v:
                    yield u, int(v)

    def labeled_edges(self) -> set[tuple[str, str]]:
        """Edge set keyed by labels, each pair ordered by label string."""
        out = set()
        for u, v in self.edges():
            a, b = self.labels[u], self.labels[v]
            out.add((a, b) if a < b else (b, a))
        return out

    def same_labeled_graph(self, other: "Graph") -> bool:
        """Equality up to internal id assignment: same labels, same edges."""
        return set(self.labels) == set(other.labels) and self.labeled_edges() == other.labeled_edges()

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, m={self.edge_count})"


@dataclass
class LoadStats:
    lines: int
    self_loops_dropped: int
    duplicates_dropped: int


def _build(pairs: Iterable[tuple[str, str]]) -> tuple[Graph, LoadStats]:
    label_to_id: dict[str, int] = {}
    labels: list[str] = []
    edges: set[int] = set()
    loops = 0
    dups = 0
    n_pairs = 0

    def intern(tok: str) -> int:
        i = label_to_id.get(tok)
        if i is None:
            i = len(labels)
            label_to_id[tok] = i
            labels.append(tok)
        return i

    for a, b in pairs:
        n_pairs += 1
        u = intern(a)
        v = intern(b)
        if u == v:
            loops += 1
            continue
        key = (u << 32) | v if u < v else (v << 32) | u
        if key in edges:
            dups += 1
        else:
            edges.add(key)

    n = len(labels)
    m = len(edges)
    if m:
        arr = np.fromiter(edges, dtype=np.int64, count=m)
        us = arr >> 32
        vs = arr & 0xFFFFFFFF
        src = np.concatenate([us, vs])
        dst = np.concatenate([vs, us])
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        indices = dst
    else:
        indptr = np.zeros(n + 1, dtype=np.int64)
        indices = np.empty(0, dtype=np.int64)
    g = Graph(indptr, indices, tuple(labels))
    return g, LoadStats(lines=n_pairs, self_loops_dropped=loops, duplicates_dropped=dups)


def load_edge_list(source: IO | str) -> Graph:
    """Load an edge list: one edge per line, two whitespace-separated labels.

    Lines starting with '#' are comments, blank lines are skipped. Self-loops
    and duplicate/parallel edges are dropped. Raises ParseError with the
    offending line number for lines that do not have exactly two tokens.
    """
    g, _ = load_edge_list_with_stats(source)
    return g


def load_edge_list_with_stats(source: IO | str) -> tuple[Graph, LoadStats]:
    """Like load_edge_list but also reports dropped loop/duplicate counts."""
    close = False
    if isinstance(source, str):
        stream: IO = open(source, "rb")
        close = True
    else:
        stream = source
    try:
        return _build(_parse_lines(stream))
    finally:
        if close:
            stream.close()


def _parse_lines(stream: IO) -> Iterator[tuple[str, str]]:
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            line = raw.decode("utf-8")
        else:
            line = raw
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(lineno, f"expected 2 tokens, got {len(toks)}")
        yield toks[0], toks[1]


def write_edge_list(g: Graph, sink: IO | str) -> None:
    """Write the cleaned edge list as TSV, u<v by label order, rows sorted."""
    rows = sorted(g.labeled_edges())
    if isinstance(sink, str):
        with open(sink, "w") as f:
            for a, b in rows:
                f.write(f"{a}\t{b}\n")
    else:
        text = isinstance(sink, io.TextIOBase)
        for a, b in rows:
            line = f"{a}\t{b}\n"
            sink.write(line if text else line.encode("utf-8"))


def induced_subgraph(g: Graph, nodes: Iterable[int] | np.ndarray) -> Graph:
    """Subgraph on `nodes` with all internal edges; labels preserved.

    Subgraph internal id i corresponds to the i-th smallest parent id in
    `nodes`, so callers can map back through the sorted node array.
    """
    ids = np.unique(np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes, dtype=np.int64))
    n = g.node_count
    if len(ids) and (ids[0] < 0 or ids[-1] >= n):
        raise InvalidArgumentError(f"node id out of range [0, {n})")
    newid = np.full(n, -1, dtype=np.int64)
    newid[ids] = np.arange(len(ids), dtype=np.int64)

    degs = g.indptr[ids + 1] - g.indptr[ids] if len(ids) else np.empty(0, dtype=np.int64)
    chunks = [g.indices[g.indptr[v] : g.indptr[v + 1]] for v in ids]
    nbr = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    src = np.repeat(np.arange(len(ids), dtype=np.int64), degs)
    mapped = newid[nbr]
    keep = mapped >= 0
    src = src[keep]
    dst = mapped[keep]

    indptr = np.zeros(len(ids) + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    labels = tuple(g.labels[v] for v in ids)
    return Graph(indptr, dst, labels)


def connected_components(g: Graph) -> list[np.ndarray]:
    """Maximal connected node sets, sorted by decreasing size then smallest label."""
    n = g.node_count
    if n == 0:
        return []
    mat = csr_matrix(
        (np.ones(len(g.indices), dtype=np.int8), g.indices, g.indptr), shape=(n, n)
    )
    k, lab = _cc(mat, directed=False)
    comps: list[np.ndarray] = [np.flatnonzero(lab == i).astype(np.int64) for i in range(k)]
    comps.sort(key=lambda c: (-len(c), min(g.labels[v] for v in c)))
    return comps


def is_connected(g: Graph) -> bool:
    if g.node_count == 0:
        return False
    return len(connected_components(g)) == 1


def is_tree(g: Graph) -> bool:
    """True iff the graph is connected with exactly n-1 edges."""
    if g.node_count == 0:
        raise InvalidArgumentError("is_tree undefined for the empty graph")
    return g.edge_count == g.node_count - 1 and is_connected(g)


@njit(cache=True, nogil=True)
def _peel_cores(indptr, indices):
    # Batagelj-Zaversnik bucket peeling, O(E).
    n = indptr.shape[0] - 1
    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
    maxdeg = 0
    for v in range(n):
        if deg[v] > maxdeg:
            maxdeg = deg[v]
    # bucket sort nodes by degree
    bin_start = np.zeros(maxdeg + 2, dtype=np.int64)
    for v in range(n):
        bin_start[deg[v] + 1] += 1
    for d in range(1, maxdeg + 2):
        bin_start[d] += bin_start[d - 1]
    pos = np.empty(n, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    fill = bin_start[:-1].copy()
    for v in range(n):
        p = fill[deg[v]]
        order[p] = v
        pos[v] = p
        fill[deg[v]] += 1
    core = deg.copy()
    for i in range(n):
        v = order[i]
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if core[u] > core[v]:
                # swap u to the front of its degree bucket, then shrink
                du = core[u]
                pu = pos[u]
                pw = bin_start[du]
                w = order[pw]
                if u != w:
                    order[pu] = w
                    order[pw] = u
                    pos[u] = pw
                    pos[w] = pu
                bin_start[du] += 1
                core[u] -= 1
    return core


def core_decomposition(g: Graph) -> np.ndarray:
    """Core number per node: the largest k such that the node is in a k-core."""
    if g.node_count == 0:
        return np.empty(0, dtype=np.int64)
    return _peel_cores(g.indptr, g.indices)
