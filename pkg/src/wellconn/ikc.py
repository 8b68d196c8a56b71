"""Iterative k-core clustering.

Repeatedly finds the densest core of what is left of the graph, emits one
connected piece of it as a cluster, and removes those nodes. Stops when no
k-core remains; nodes never emitted stay unclustered.
"""

from __future__ import annotations

import numpy as np

from .clustering import Clustering
from .errors import InvalidArgumentError
from .graph import Graph, connected_components, core_decomposition, induced_subgraph


def cluster_ikc(g: Graph, k: int) -> Clustering:
    """Extract clusters from successive maximum cores.

    Each round: compute core numbers of the remaining graph; stop if the
    maximum is below k; otherwise take the nodes of maximum core number,
    emit the largest connected component among them (ties broken by the
    smallest node label), and remove it. Every emitted cluster has minimum
    internal degree >= k.
    """
    if g.node_count == 0:
        raise InvalidArgumentError("graph is empty")
    if k < 1:
        raise InvalidArgumentError("k must be at least 1")
    remaining = g
    groups: dict[str, list[str]] = {}
    idx = 0
    while remaining.node_count > 0:
        core = core_decomposition(remaining)
        cmax = int(core.max())
        if cmax < k:
            break
        sub = induced_subgraph(remaining, np.flatnonzero(core == cmax))
        chosen = connected_components(sub)[0]
        labels = [sub.labels[v] for v in chosen]
        groups[str(idx)] = labels
        idx += 1
        emitted = set(labels)
        keep = [v for v in range(remaining.node_count) if remaining.labels[v] not in emitted]
        remaining = induced_subgraph(remaining, keep)
    return Clustering(g.labels, groups)
