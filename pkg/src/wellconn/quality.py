"""Partition quality functions and per-cluster edge statistics.

Two objectives are supported. The constant-resolution objective scores a
partition as sum over clusters of e_c - r*C(n_c, 2); singletons contribute
exactly zero. Modularity scores it as sum of e_c/m - (d_c/2m)^2 where
implicit singletons do contribute their degree term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import Clustering
from .errors import InvalidArgumentError
from .graph import Graph


@dataclass(frozen=True)
class ClusterStats:
    """Size, internal edge count, and total member degree of one cluster."""

    n_c: int
    e_c: int
    d_c: int
    mincut: int | None = None


def cluster_stats(g: Graph, members: frozenset[str] | set[str]) -> ClusterStats:
    ids = np.fromiter((g.id_of(lab) for lab in members), dtype=np.int64, count=len(members))
    inset = np.zeros(g.node_count, dtype=bool)
    inset[ids] = True
    e = 0
    d = 0
    for v in ids:
        nbr = g.neighbors(v)
        d += len(nbr)
        e += int(np.count_nonzero(inset[nbr]))
    return ClusterStats(n_c=len(ids), e_c=e // 2, d_c=d)


def _community_arrays(g: Graph, c: Clustering) -> tuple[np.ndarray, int]:
    """Community index per internal node id; implicit singletons get their own."""
    if c.universe != set(g.labels):
        raise InvalidArgumentError("clustering universe does not match graph nodes")
    comm = np.full(g.node_count, -1, dtype=np.int64)
    k = 0
    for cid in sorted(c.clusters):
        for lab in c.clusters[cid]:
            comm[g.id_of(lab)] = k
        k += 1
    for v in range(g.node_count):
        if comm[v] == -1:
            comm[v] = k
            k += 1
    return comm, k


def _per_community_stats(g: Graph, comm: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    deg = g.degrees()
    sizes = np.bincount(comm, minlength=k)
    dsum = np.bincount(comm, weights=deg.astype(np.float64), minlength=k).astype(np.int64)
    src = np.repeat(np.arange(g.node_count, dtype=np.int64), deg)
    same = comm[src] == comm[g.indices]
    esum = np.bincount(comm[src][same], minlength=k) // 2
    return sizes, esum, dsum


def quality_cpm(g: Graph, c: Clustering, r: float) -> float:
    """Sum over clusters of internal edges minus r times possible pairs."""
    if r <= 0:
        raise InvalidArgumentError("resolution must be positive")
    comm, k = _community_arrays(g, c)
    sizes, esum, _ = _per_community_stats(g, comm, k)
    return float(np.sum(esum - r * sizes * (sizes - 1) / 2.0))


def quality_modularity(g: Graph, c: Clustering) -> float:
    """Standard undirected modularity; needs at least one edge."""
    m = g.edge_count
    if m == 0:
        raise InvalidArgumentError("modularity undefined for an edgeless graph")
    comm, k = _community_arrays(g, c)
    _, esum, dsum = _per_community_stats(g, comm, k)
    return float(np.sum(esum / m - (dsum / (2.0 * m)) ** 2))
