import numpy as np
import pytest

from wellconn.clustering import Clustering
from wellconn.errors import InvalidArgumentError
from wellconn.graph import Graph, induced_subgraph, is_connected
from wellconn.leiden import optimize_partition
from wellconn.quality import quality_cpm, quality_modularity

from _graphs import complete, cycle, graph_of, path
from _oracles import best_partition_score, cpm_score, modularity_score


def ring_of_triangles(k):
    """k triangles joined in a ring by single edges."""
    pairs = []
    for t in range(k):
        a, b, c = (f"t{t}a", f"t{t}b", f"t{t}c")
        pairs += [(a, b), (b, c), (a, c)]
        pairs.append((c, f"t{(t + 1) % k}a"))
    return pairs


def test_two_cliques_with_bridge_cpm():
    g = graph_of(complete(5, "a") + complete(5, "b") + [("a000", "b000")])
    c = optimize_partition(g, "cpm", 0.5, seed=0)
    want = Clustering(g.labels, {
        "0": {x for x in g.labels if x[0] == "a"},
        "1": {x for x in g.labels if x[0] == "b"},
    })
    assert c.same_partition(want)


def test_k6_low_resolution_single_cluster():
    g = graph_of(complete(6))
    c = optimize_partition(g, "cpm", 0.01, seed=0)
    assert c.n_clusters == 1
    assert len(next(iter(c.clusters.values()))) == 6


def test_ring_of_triangles_modularity():
    g = graph_of(ring_of_triangles(4))
    c = optimize_partition(g, "modularity", 1.0, seed=0)
    assert c.n_clusters == 4
    assert sorted(len(m) for m in c.clusters.values()) == [3, 3, 3, 3]


def test_all_nodes_assigned_and_ids_sequential():
    g = graph_of(path(7) + cycle(5, "z"))
    c = optimize_partition(g, "cpm", 0.2, seed=3)
    assert c.unassigned() == frozenset()
    assert set(c.clusters) == {str(i) for i in range(c.n_clusters)}


def test_every_cluster_connected():
    rng = np.random.default_rng(11)
    for _ in range(12):
        n = int(rng.integers(6, 40))
        pairs = [(f"n{i:02d}", f"n{j:02d}") for i in range(n) for j in range(i + 1, n)
                 if rng.random() < 0.15]
        if not pairs:
            continue
        g = graph_of(pairs)
        for obj, r in (("cpm", 0.1), ("cpm", 0.9), ("modularity", 1.0)):
            c = optimize_partition(g, obj, r, seed=7)
            for ms in c.clusters.values():
                if len(ms) == 1:
                    continue
                sub = induced_subgraph(g, [g.id_of(x) for x in ms])
                assert is_connected(sub)


def test_matches_exhaustive_optimum_small():
    rng = np.random.default_rng(23)
    checked = 0
    while checked < 12:
        n = int(rng.integers(3, 8))
        pairs = [(f"n{i}", f"n{j}") for i in range(n) for j in range(i + 1, n)
                 if rng.random() < 0.5]
        if not pairs:
            continue
        g = graph_of(pairs)
        nodes = sorted(g.labels)
        edges = sorted(g.labeled_edges())
        checked += 1
        for obj, r in (("cpm", 0.25), ("cpm", 0.6), ("modularity", 1.0)):
            c = optimize_partition(g, obj, r, seed=int(rng.integers(100)))
            got = (quality_cpm(g, c, r) if obj == "cpm" else quality_modularity(g, c))
            best = best_partition_score(nodes, edges, obj, r)
            assert got == pytest.approx(best, abs=1e-9), (obj, r, edges)


def test_no_single_move_improves():
    """Exit contract: output is single-node-move optimal."""
    rng = np.random.default_rng(41)
    for _ in range(8):
        n = int(rng.integers(10, 60))
        pairs = [(f"n{i:02d}", f"n{j:02d}") for i in range(n) for j in range(i + 1, n)
                 if rng.random() < 0.12]
        if not pairs:
            continue
        g = graph_of(pairs)
        for obj, r in (("cpm", 0.3), ("modularity", 1.0)):
            c = optimize_partition(g, obj, r, seed=5)
            edges = sorted(g.labeled_edges())
            blocks = {cid: set(ms) for cid, ms in c.clusters.items()}
            base_blocks = [sorted(b) for b in blocks.values()]
            score = cpm_score if obj == "cpm" else modularity_score
            base = (score(edges, base_blocks, r) if obj == "cpm"
                    else score(edges, base_blocks))
            for v in g.labels:
                src = next(cid for cid, b in blocks.items() if v in b)
                targets = list(blocks) + ["__new__"]
                for dst in targets:
                    if dst == src:
                        continue
                    trial = {cid: set(b) for cid, b in blocks.items()}
                    trial[src].discard(v)
                    trial.setdefault(dst, set()).add(v)
                    tb = [sorted(b) for b in trial.values() if b]
                    q = score(edges, tb, r) if obj == "cpm" else score(edges, tb)
                    assert q <= base + 1e-9, (obj, v, dst)


def test_determinism_and_seed_sensitivity():
    rng = np.random.default_rng(9)
    pairs = [(f"n{i:02d}", f"n{j:02d}") for i in range(40) for j in range(i + 1, 40)
             if rng.random() < 0.2]
    g = graph_of(pairs)
    a = optimize_partition(g, "cpm", 0.3, seed=12)
    b = optimize_partition(g, "cpm", 0.3, seed=12)
    assert a.same_partition(b)
    assert a.clusters == b.clusters


def test_validation():
    g = graph_of(path(3))
    with pytest.raises(InvalidArgumentError):
        optimize_partition(g, "cpm", 0.0, seed=0)
    with pytest.raises(InvalidArgumentError):
        optimize_partition(g, "nope", 0.5, seed=0)
    with pytest.raises(InvalidArgumentError):
        optimize_partition(Graph.from_edge_pairs([]), "cpm", 0.5, seed=0)
    with pytest.raises(InvalidArgumentError):
        optimize_partition(g, "cpm", 0.5, seed=-1)


def test_isolated_nodes_become_singletons():
    g = Graph.from_edge_pairs([("a", "b"), ("c", "c")])  # c isolated after loop drop
    c = optimize_partition(g, "cpm", 0.4, seed=0)
    assert c.cluster_of("c") is not None
    assert len([ms for ms in c.clusters.values() if ms == frozenset({"c"})]) == 1
