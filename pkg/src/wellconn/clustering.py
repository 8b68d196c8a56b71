"""Clusterings: disjoint labeled node groups over a fixed node universe.

Nodes of the universe that belong to no group are implicit singletons; they
count toward coverage denominators and are materialized on demand for the
agreement metrics. Cluster ids are strings and deterministic.
"""

from __future__ import annotations

import io
from typing import IO, Iterable, Mapping

from .errors import ConsistencyError, FormatError, InvalidArgumentError, UnknownLabelError
from .graph import Graph


class Clustering:
    """Immutable map of cluster id to member label set over a universe."""

    __slots__ = ("universe", "clusters", "_assignment")

    def __init__(self, universe: Iterable[str], clusters: Mapping[str, Iterable[str]]):
        self.universe = frozenset(universe)
        built: dict[str, frozenset[str]] = {}
        assignment: dict[str, str] = {}
        for cid, members in clusters.items():
            ms = frozenset(members)
            if not ms:
                continue
            for node in ms:
                if node not in self.universe:
                    raise UnknownLabelError(f"node {node!r} not in universe")
                if node in assignment:
                    raise ConsistencyError(
                        f"node {node!r} in clusters {assignment[node]!r} and {cid!r}"
                    )
                assignment[node] = str(cid)
            built[str(cid)] = ms
        self.clusters = built
        self._assignment = assignment

    @property
    def n_nodes(self) -> int:
        return len(self.universe)

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    def cluster_of(self, node: str) -> str | None:
        if node not in self.universe:
            raise UnknownLabelError(f"node {node!r} not in universe")
        return self._assignment.get(node)

    def assigned_count(self) -> int:
        return len(self._assignment)

    def sizes(self) -> dict[str, int]:
        return {cid: len(ms) for cid, ms in self.clusters.items()}

    def unassigned(self) -> frozenset[str]:
        return self.universe - self._assignment.keys()

    def materialized_groups(self) -> list[frozenset[str]]:
        """All groups including one singleton per unassigned node."""
        groups = list(self.clusters.values())
        groups.extend(frozenset((node,)) for node in sorted(self.unassigned()))
        return groups

    def as_partition(self) -> frozenset[frozenset[str]]:
        """Identity-free view: the set of member sets, singletons included."""
        return frozenset(self.materialized_groups())

    def same_partition(self, other: "Clustering") -> bool:
        return self.universe == other.universe and self.as_partition() == other.as_partition()

    def restrict_universe(self, universe: Iterable[str]) -> "Clustering":
        """Same groups over a different universe; groups must fit inside it."""
        return Clustering(universe, self.clusters)

    def __repr__(self) -> str:
        return f"Clustering(n_nodes={self.n_nodes}, n_clusters={self.n_clusters})"


def load_clustering(source: IO | str, g: Graph) -> Clustering:
    """Read `node<TAB>cluster_id` rows into a Clustering over g's nodes.

    Nodes of g not mentioned become implicit singletons. A node assigned
    twice is a FormatError; a label g does not have is an UnknownLabelError.
    Both carry the offending line number.
    """
    close = False
    if isinstance(source, str):
        stream: IO = open(source, "rb")
        close = True
    else:
        stream = source
    try:
        assignment: dict[str, str] = {}
        groups: dict[str, set[str]] = {}
        for lineno, raw in enumerate(stream, start=1):
            line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) != 2:
                raise FormatError(f"expected 2 tokens, got {len(toks)}", lineno)
            node, cid = toks
            if node not in g._label_to_id:
                raise UnknownLabelError(f"node {node!r} not in graph", lineno)
            if node in assignment:
                raise FormatError(f"node {node!r} assigned twice", lineno)
            assignment[node] = cid
            groups.setdefault(cid, set()).add(node)
        return Clustering(g.labels, groups)
    finally:
        if close:
            stream.close()


def save_clustering(c: Clustering, sink: IO | str) -> None:
    """Write assigned nodes as `node<TAB>cluster_id`, sorted by node label."""
    rows = sorted((node, cid) for cid, ms in c.clusters.items() for node in ms)
    if isinstance(sink, str):
        with open(sink, "w") as f:
            for node, cid in rows:
                f.write(f"{node}\t{cid}\n")
    else:
        text = isinstance(sink, io.TextIOBase)
        for node, cid in rows:
            line = f"{node}\t{cid}\n"
            sink.write(line if text else line.encode("utf-8"))


def relabel_sequential(c: Clustering) -> Clustering:
    """Renumber cluster ids to "0".."k-1" ordered by smallest member label."""
    ordered = sorted(c.clusters.values(), key=min)
    return Clustering(c.universe, {str(i): ms for i, ms in enumerate(ordered)})


def node_coverage(c: Clustering, total_nodes: int, min_size: int) -> float:
    """Percent of all nodes sitting in clusters of at least `min_size`."""
    if total_nodes <= 0:
        raise InvalidArgumentError("total_nodes must be positive")
    if min_size < 1:
        raise InvalidArgumentError("min_size must be at least 1")
    covered = sum(len(ms) for ms in c.clusters.values() if len(ms) >= min_size)
    if min_size == 1:
        covered += len(c.unassigned())
    return 100.0 * covered / total_nodes
