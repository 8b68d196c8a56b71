"""Connectivity profiles: audit every cluster's min cut against a threshold.

A cluster counts as well connected when its minimum edge cut strictly
exceeds t(n) for its size n. Profiles also flag trees and disconnected
clusters; aggregate percentages cover the profiled clusters only (those of
at least min_size nodes).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .clustering import Clustering, node_coverage
from .errors import InvalidArgumentError, UnknownLabelError
from .graph import Graph, induced_subgraph
from .mincut import minimum_cut
from .thresholds import ThresholdFn


@dataclass(frozen=True)
class ClusterProfile:
    """Connectivity facts for one cluster; mincut is None for singletons."""

    id: str
    n: int
    mincut: int | None
    well_connected: bool
    is_tree: bool
    connected: bool


@dataclass(frozen=True)
class ProfileReport:
    clusters: tuple[ClusterProfile, ...]
    pct_well_connected: float
    pct_disconnected: float
    node_coverage: float
    threshold: str
    min_size: int

    def to_dict(self) -> dict:
        return {
            "clusters": [
                {
                    "id": p.id,
                    "n": p.n,
                    "mincut": p.mincut,
                    "well_connected": p.well_connected,
                    "is_tree": p.is_tree,
                    "connected": p.connected,
                }
                for p in self.clusters
            ],
            "pct_well_connected": self.pct_well_connected,
            "pct_disconnected": self.pct_disconnected,
            "node_coverage": self.node_coverage,
            "threshold": self.threshold,
            "min_size": self.min_size,
        }

    def scatter_rows(self) -> list[tuple[int, int]]:
        """(size, mincut) pairs for plotting; singletons are excluded."""
        return [(p.n, p.mincut) for p in self.clusters if p.mincut is not None]


def profile_cluster(cluster: Graph, t: ThresholdFn, cluster_id: str = "") -> ClusterProfile:
    """Profile one cluster given as its induced subgraph."""
    n = cluster.node_count
    if n == 0:
        raise InvalidArgumentError("cannot profile an empty cluster")
    if n == 1:
        return ClusterProfile(
            id=cluster_id, n=1, mincut=None, well_connected=False, is_tree=True, connected=True
        )
    mc = minimum_cut(cluster).weight
    return ClusterProfile(
        id=cluster_id,
        n=n,
        mincut=mc,
        well_connected=mc > t(n),
        is_tree=cluster.edge_count == n - 1 and mc >= 1,
        connected=mc >= 1,
    )


def profile_clustering(
    g: Graph,
    c: Clustering,
    t: ThresholdFn,
    min_size: int = 11,
    threads: int | None = None,
) -> ProfileReport:
    """Profile all clusters of at least min_size nodes.

    Percentages are over the profiled clusters; disconnected means mincut 0.
    Coverage is the percent of all graph nodes inside clusters of at least
    min_size nodes. Thread count only affects speed, never the result.
    """
    if min_size < 1:
        raise InvalidArgumentError("min_size must be at least 1")
    known = g._label_to_id
    for cid, ms in c.clusters.items():
        for lab in ms:
            if lab not in known:
                raise UnknownLabelError(f"cluster {cid!r} has node {lab!r} not in graph")
    items = sorted(
        (cid, ms) for cid, ms in c.clusters.items() if len(ms) >= min_size
    )

    def work(item: tuple[str, frozenset[str]]) -> ClusterProfile:
        cid, ms = item
        sub = induced_subgraph(g, [g.id_of(lab) for lab in ms])
        return profile_cluster(sub, t, cid)

    if threads is not None and threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            profiles = list(pool.map(work, items))
    else:
        profiles = [work(it) for it in items]

    total = len(profiles)
    n_wc = sum(1 for p in profiles if p.well_connected)
    n_disc = sum(1 for p in profiles if p.mincut == 0)
    cov = node_coverage(c, g.node_count, min_size) if g.node_count else 0.0
    return ProfileReport(
        clusters=tuple(profiles),
        pct_well_connected=100.0 * n_wc / total if total else 0.0,
        pct_disconnected=100.0 * n_disc / total if total else 0.0,
        node_coverage=cov,
        threshold=t.describe(),
        min_size=min_size,
    )
