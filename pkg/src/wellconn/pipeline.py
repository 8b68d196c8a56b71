"""The four-stage connectivity-repair pipeline.

Stage 1 clusters the graph (or takes a caller-provided clustering). Stage 2
drops clusters smaller than B and tree clusters. Stage 3 repairs each
remaining cluster: peel low-degree nodes, then either certify the cluster
well connected or remove its minimum cut, recluster the pieces, and repeat
on every piece. Stage 4 drops undersized results. Every output cluster is
guaranteed to have mincut > t(n) and at least B nodes; the guarantee is
re-verified before returning.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .clustering import Clustering, node_coverage
from .clusterers import ClustererConfig, make_clustering
from .errors import ConsistencyError, InvalidArgumentError, RecursionBudgetError
from .graph import Graph, connected_components, induced_subgraph, is_tree
from .mincut import minimum_cut
from .thresholds import LOG10, ThresholdFn

FATE_EXTANT = "extant"
FATE_REDUCED = "reduced"
FATE_SPLIT = "split"
FATE_DEGRADED = "degraded"


@dataclass(frozen=True)
class CMParams:
    """Pipeline knobs: clusterer, minimum cluster size B, and threshold."""

    clusterer: ClustererConfig
    B: int = 11
    threshold: ThresholdFn = LOG10
    max_recursion_depth: int | None = None

    def __post_init__(self):
        if self.B < 1:
            raise InvalidArgumentError("B must be at least 1")
        if self.max_recursion_depth is not None and self.max_recursion_depth < 1:
            raise InvalidArgumentError("max_recursion_depth must be at least 1")


@dataclass(frozen=True)
class CMReport:
    """Everything a run produced: stage summaries, per-input-cluster fates,
    coverage at each stage, and the output clustering itself."""

    stages: tuple[dict, ...]
    fates: dict[str, str]
    removed_at_filter: frozenset[str]
    coverage: dict[str, dict[str, float]]
    output: Clustering
    recursion: dict[str, int]


@njit(cache=True, nogil=True)
def _peel_rounds(indptr, indices, tvals):
    """Round-synchronous peeling: drop all nodes with degree <= t(current n),
    recompute, repeat until stable. Returns the survivor mask."""
    n = indptr.shape[0] - 1
    alive = np.ones(n, dtype=np.uint8)
    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
    n_alive = n
    mark = np.empty(n, dtype=np.int64)
    while n_alive > 0:
        tv = tvals[n_alive]
        nmark = 0
        for v in range(n):
            if alive[v] == 1 and deg[v] <= tv:
                mark[nmark] = v
                nmark += 1
        if nmark == 0:
            break
        for i in range(nmark):
            alive[mark[i]] = 0
        for i in range(nmark):
            v = mark[i]
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if alive[u] == 1:
                    deg[u] -= 1
        n_alive -= nmark
    return alive


def prune_low_degree(cluster: Graph, t: ThresholdFn) -> frozenset[str]:
    """Surviving node labels after iterated low-degree peeling.

    Each round removes every node whose current degree is at most t(n) for
    the current remaining size n, then re-evaluates both. The result can be
    empty.
    """
    n = cluster.node_count
    if n == 0:
        raise InvalidArgumentError("cannot prune an empty cluster")
    tvals = np.empty(n + 1, dtype=np.float64)
    tvals[0] = 0.0
    for i in range(1, n + 1):
        tvals[i] = t(i)
    alive = _peel_rounds(cluster.indptr, cluster.indices, tvals)
    return frozenset(cluster.labels[v] for v in np.flatnonzero(alive))


def derive_seed(root_seed: int, labels: frozenset[str] | set[str]) -> int:
    """Deterministic per-subgraph seed so parallel order cannot matter."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(root_seed).encode())
    for lab in sorted(labels):
        h.update(b"\x00")
        h.update(lab.encode())
    return int.from_bytes(h.digest(), "big") % (2**31)


def _recluster_config(params: CMParams, piece: frozenset[str]) -> ClustererConfig:
    cfg = params.clusterer
    if cfg.kind in ("cpm", "modularity"):
        return replace(cfg, seed=derive_seed(cfg.seed, piece))
    return cfg


def _cm_cluster_stats(cluster: Graph, params: CMParams) -> tuple[list[frozenset[str]], dict[str, int]]:
    if cluster.node_count == 0:
        raise InvalidArgumentError("cannot run on an empty cluster")
    if params.clusterer.kind == "external":
        raise InvalidArgumentError("re-clustering needs a computing clusterer, not external")
    t = params.threshold
    out: list[frozenset[str]] = []
    work: list[tuple[frozenset[str], int]] = [(frozenset(cluster.labels), 0)]
    stats = {"tasks": 0, "max_depth": 0, "edges_removed": 0, "nodes_pruned": 0}
    while work:
        labels, depth = work.pop()
        stats["tasks"] += 1
        stats["max_depth"] = max(stats["max_depth"], depth)
        if params.max_recursion_depth is not None and depth > params.max_recursion_depth:
            raise RecursionBudgetError(
                f"recursion depth {depth} exceeded", diagnostics=dict(stats)
            )
        sub = induced_subgraph(cluster, [cluster.id_of(x) for x in labels])
        survivors = prune_low_degree(sub, t)
        stats["nodes_pruned"] += sub.node_count - len(survivors)
        if len(survivors) < params.B or len(survivors) < 2:
            continue
        if len(survivors) < sub.node_count:
            sub = induced_subgraph(cluster, [cluster.id_of(x) for x in survivors])
        cut = minimum_cut(sub)
        if cut.weight > t(sub.node_count):
            out.append(frozenset(sub.labels))
            continue
        stats["edges_removed"] += cut.weight
        # Removing the cut edges leaves the two sides (or, for a cut of
        # weight 0, the connected components). Any edge removed here or in
        # an ancestor step crosses a piece boundary, so inducing a piece on
        # the original cluster graph never brings a removed edge back.
        if cut.weight == 0:
            comps = connected_components(sub)
            pieces = [frozenset(sub.labels[v] for v in comp) for comp in comps]
        else:
            pieces = [frozenset(cut.light), frozenset(cut.heavy)]
        for piece in pieces:
            if len(piece) < params.B or len(piece) < 2:
                continue
            pg = induced_subgraph(cluster, [cluster.id_of(x) for x in piece])
            sub_clustering = make_clustering(pg, _recluster_config(params, piece))
            for ms in sub_clustering.clusters.values():
                work.append((ms, depth + 1))
    out.sort(key=min)
    return out, stats


def cm_cluster(cluster: Graph, params: CMParams) -> list[frozenset[str]]:
    """Repair one cluster; returns disjoint well-connected node sets.

    Worklist form of the recursive rule: peel, give up below size B,
    certify if the min cut beats the threshold, otherwise remove the cut
    edges, recluster each connected piece, and queue every resulting
    cluster. Reclustering seeds derive from the member set, so results do
    not depend on processing order. Singleton outputs are never produced:
    a single node has no cut to certify.
    """
    return _cm_cluster_stats(cluster, params)[0]


def filter_stage(c: Clustering, g: Graph, params: CMParams) -> tuple[Clustering, dict[str, str]]:
    """Drop clusters below size B and tree clusters.

    Returns the filtered clustering and a map of removed cluster id to the
    reason ("small" or "tree"). A single-node cluster counts as a tree.
    """
    kept: dict[str, frozenset[str]] = {}
    removed: dict[str, str] = {}
    for cid in sorted(c.clusters):
        ms = c.clusters[cid]
        if len(ms) < params.B:
            removed[cid] = "small"
            continue
        sub = induced_subgraph(g, [g.id_of(x) for x in ms])
        if is_tree(sub):
            removed[cid] = "tree"
            continue
        kept[cid] = ms
    return Clustering(c.universe, kept), removed


def classify_fate(input_c: Clustering, output_c: Clustering) -> dict[str, str]:
    """Label each input cluster by what the pipeline left of it.

    No surviving output subset: degraded. One survivor equal to the input
    cluster: extant; a proper subset: reduced. Two or more: split. Every
    output cluster must sit inside exactly one input cluster.
    """
    owner: dict[str, str] = {}
    for cid, ms in input_c.clusters.items():
        for lab in ms:
            owner[lab] = cid
    children: dict[str, list[frozenset[str]]] = {cid: [] for cid in input_c.clusters}
    for ocid, oms in output_c.clusters.items():
        parents = {owner.get(lab) for lab in oms}
        if len(parents) != 1 or None in parents:
            raise ConsistencyError(
                f"output cluster {ocid!r} is not inside exactly one input cluster"
            )
        children[parents.pop()].append(oms)
    fates: dict[str, str] = {}
    for cid, ms in input_c.clusters.items():
        subs = children[cid]
        if len(subs) == 0:
            fates[cid] = FATE_DEGRADED
        elif len(subs) >= 2:
            fates[cid] = FATE_SPLIT
        elif subs[0] == ms:
            fates[cid] = FATE_EXTANT
        else:
            fates[cid] = FATE_REDUCED
    return fates


def _coverage_pair(c: Clustering, total: int, b: int) -> dict[str, float]:
    return {
        "ge2": node_coverage(c, total, 2) if total else 0.0,
        "geB": node_coverage(c, total, b) if total else 0.0,
    }


def verify_guarantee(g: Graph, c: Clustering, params: CMParams) -> None:
    """Re-check the pipeline postcondition on an output clustering."""
    t = params.threshold
    for cid, ms in c.clusters.items():
        if len(ms) < params.B:
            raise ConsistencyError(f"output cluster {cid!r} has size {len(ms)} < B")
        sub = induced_subgraph(g, [g.id_of(x) for x in ms])
        w = minimum_cut(sub).weight
        if not w > t(sub.node_count):
            raise ConsistencyError(
                f"output cluster {cid!r} has mincut {w} <= t({sub.node_count})"
            )


def run_pipeline(
    g: Graph,
    params: CMParams,
    input_clustering: Clustering | None = None,
    threads: int | None = None,
) -> CMReport:
    """Run all four stages and assemble the report.

    Stage 3 processes clusters as independent tasks; results are merged in
    input-cluster-id order, so the thread count never changes the output.
    Output cluster ids are parent-derived: a cluster split into several
    pieces yields ids "<parent>.0", "<parent>.1", ... ordered by smallest
    member label, while a cluster surviving unchanged keeps its id.
    """
    total = g.node_count
    if total == 0:
        empty = Clustering([], {})
        return CMReport(
            stages=({"name": "input", "n_clusters": 0, "note": "empty graph"},),
            fates={},
            removed_at_filter=frozenset(),
            coverage={},
            output=empty,
            recursion={"tasks": 0, "max_depth": 0, "edges_removed": 0, "nodes_pruned": 0},
        )
    if input_clustering is not None:
        clustering = input_clustering
        if clustering.universe != set(g.labels):
            clustering = clustering.restrict_universe(g.labels)
    else:
        clustering = make_clustering(g, params.clusterer)

    filtered, removed = filter_stage(clustering, g, params)

    items = sorted(filtered.clusters.items())

    def work(item: tuple[str, frozenset[str]]):
        cid, ms = item
        sub = induced_subgraph(g, [g.id_of(x) for x in ms])
        return cid, _cm_cluster_stats(sub, params)

    if threads is not None and threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = dict(pool.map(work, items))
    else:
        results = dict(work(it) for it in items)

    recursion = {"tasks": 0, "max_depth": 0, "edges_removed": 0, "nodes_pruned": 0}
    out_groups: dict[str, frozenset[str]] = {}
    stage4_removed = 0
    for cid, _ in items:
        sets, stats = results[cid]
        for key in recursion:
            if key == "max_depth":
                recursion[key] = max(recursion[key], stats[key])
            else:
                recursion[key] += stats[key]
        stage4_removed += sum(1 for s in sets if len(s) < params.B)
        sets = [s for s in sets if len(s) >= params.B]
        if len(sets) == 1 and sets[0] == filtered.clusters[cid]:
            out_groups[cid] = sets[0]
        else:
            for i, s in enumerate(sets):
                out_groups[f"{cid}.{i}"] = s
    output = Clustering(g.labels, out_groups)

    verify_guarantee(g, output, params)
    fates = classify_fate(clustering, output)

    coverage = {
        "input": _coverage_pair(clustering, total, params.B),
        "post_filter": _coverage_pair(filtered, total, params.B),
        "output": _coverage_pair(output, total, params.B),
    }
    stages = (
        {
            "name": "input",
            "n_clusters": clustering.n_clusters,
            "clusterer": params.clusterer.describe(),
            "provided": input_clustering is not None,
        },
        {
            "name": "filter",
            "removed_small": sum(1 for v in removed.values() if v == "small"),
            "removed_tree": sum(1 for v in removed.values() if v == "tree"),
            "n_clusters": filtered.n_clusters,
        },
        {
            "name": "cm",
            "clusters_processed": len(items),
            "stage4_removed": stage4_removed,
        },
        {
            "name": "output",
            "n_clusters": output.n_clusters,
        },
    )
    return CMReport(
        stages=stages,
        fates=fates,
        removed_at_filter=frozenset(removed),
        coverage=coverage,
        output=output,
        recursion=recursion,
    )
