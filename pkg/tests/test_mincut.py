import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wellconn.errors import InvalidArgumentError, SizeLimitError
from wellconn.graph import Graph, connected_components
from wellconn.mincut import brute_force_minimum_cut, cut_edges, cut_weight, minimum_cut

from _graphs import complete, cycle, graph_of, path, star, two_k20_bridge
from _oracles import min_cut_weight


def test_known_cut_weights():
    assert minimum_cut(graph_of(complete(8))).weight == 7
    assert minimum_cut(graph_of(cycle(10))).weight == 2
    assert minimum_cut(graph_of(path(10))).weight == 1
    assert minimum_cut(graph_of(star(12))).weight == 1


def test_bridge_between_cliques():
    g = graph_of(two_k20_bridge())
    res = minimum_cut(g)
    assert res.weight == 1
    assert res.edges == (("a000", "b000"),)
    assert len(res.light) == 20


def test_light_side_is_smaller_or_lexicographic():
    g = graph_of(complete(4, "z") + [("z000", "w000")])
    res = minimum_cut(g)
    assert res.light == ("w000",)
    # equal halves: light side is the lexicographically smaller tuple
    g2 = graph_of(complete(3, "a") + complete(3, "b") + [("a000", "b000")])
    res2 = minimum_cut(g2)
    assert res2.light == ("a000", "a001", "a002")


def test_sides_partition_nodes():
    g = graph_of(cycle(7))
    res = minimum_cut(g)
    assert sorted(res.light + res.heavy) == sorted(g.labels)
    assert len(res.light) <= len(res.heavy)


def test_cut_edges_match_weight():
    for pairs in (cycle(9), complete(6), two_k20_bridge()):
        g = graph_of(pairs)
        res = minimum_cut(g)
        assert len(res.edges) == res.weight
        assert res.edges == tuple(sorted(cut_edges(g, set(res.light))))
        assert cut_weight(g, set(res.light)) == res.weight


def test_disconnected_graph_has_zero_cut():
    g = graph_of(complete(4, "x") + complete(3, "a"))
    res = minimum_cut(g)
    assert res.weight == 0
    assert res.edges == ()
    # light side: smallest component, ties by smallest label
    assert res.light == ("a000", "a001", "a002")


def test_too_small_inputs():
    with pytest.raises(InvalidArgumentError):
        minimum_cut(Graph.from_edge_pairs([]))
    with pytest.raises(InvalidArgumentError):
        minimum_cut(graph_of([("a", "a")]))  # single node after loop drop


def test_brute_force_size_limit():
    g = graph_of(cycle(21))
    with pytest.raises(SizeLimitError):
        brute_force_minimum_cut(g)


def test_brute_force_agrees_on_fixtures():
    for pairs in (cycle(8), complete(7), path(9), star(6)):
        g = graph_of(pairs)
        a = minimum_cut(g)
        b = brute_force_minimum_cut(g)
        assert a.weight == b.weight
        assert a.light == b.light
        assert a.edges == b.edges


def test_random_sweep_three_way():
    """Implementation vs in-package brute force vs an independent oracle."""
    rng = np.random.default_rng(77)
    trials = 0
    while trials < 120:
        n = int(rng.integers(3, 11))
        p = float(rng.choice([0.2, 0.4, 0.7]))
        mask = rng.random((n, n)) < p
        pairs = [(f"n{i}", f"n{j}") for i in range(n) for j in range(i + 1, n) if mask[i, j]]
        if not pairs:
            continue
        g = graph_of(pairs)
        if g.node_count < 2:
            continue
        trials += 1
        fast = minimum_cut(g)
        slow = brute_force_minimum_cut(g)
        # weight must agree; the side reported may be any one optimal cut
        assert fast.weight == slow.weight, pairs
        assert cut_weight(g, set(fast.light)) == fast.weight, pairs
        if len(connected_components(g)) == 1:
            nodes = sorted(g.labels)
            assert fast.weight == min_cut_weight(nodes, pairs)


def test_determinism():
    g = graph_of(two_k20_bridge() + cycle(30, "r"))
    runs = {minimum_cut(g) for _ in range(3)}
    assert len(runs) == 1


@st.composite
def random_graph(draw):
    n = draw(st.integers(min_value=2, max_value=12))
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(all_pairs), min_size=1, max_size=len(all_pairs), unique=True))
    return [(f"v{i}", f"v{j}") for i, j in chosen]


@settings(max_examples=40)
@given(random_graph())
def test_removing_cut_edges_disconnects(pairs):
    g = graph_of(pairs)
    if g.node_count < 2:
        return
    res = minimum_cut(g)
    if res.weight == 0:
        assert len(connected_components(g)) > 1
        return
    remaining = [e for e in g.labeled_edges() if e not in set(res.edges)]
    light = set(res.light)
    # no surviving edge crosses the reported bipartition
    assert all((u in light) == (v in light) for u, v in remaining)
    assert res.weight == brute_force_minimum_cut(g).weight
