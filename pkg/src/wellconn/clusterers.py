"""Clusterer selection: one config type dispatching to the implementations."""

from __future__ import annotations

from dataclasses import dataclass

from .clustering import Clustering, load_clustering
from .errors import InvalidArgumentError
from .graph import Graph
from .ikc import cluster_ikc
from .leiden import optimize_partition


@dataclass(frozen=True)
class ClustererConfig:
    """Which clusterer to run and with what knobs.

    kind: "cpm" (resolution r), "modularity", "ikc" (core order k), or
    "external" (read a clustering TSV from path instead of computing).
    """

    kind: str
    resolution: float = 0.01
    k: int = 10
    seed: int = 0
    path: str | None = None

    def __post_init__(self):
        if self.kind not in ("cpm", "modularity", "ikc", "external"):
            raise InvalidArgumentError(f"unknown clusterer kind: {self.kind!r}")
        if self.kind == "cpm" and self.resolution <= 0:
            raise InvalidArgumentError("cpm needs resolution > 0")
        if self.kind == "ikc" and self.k < 1:
            raise InvalidArgumentError("ikc needs k >= 1")
        if self.kind == "external" and not self.path:
            raise InvalidArgumentError("external clusterer needs a path")
        if self.seed < 0:
            raise InvalidArgumentError("seed must be non-negative")

    def describe(self) -> str:
        if self.kind == "cpm":
            return f"cpm(r={self.resolution:g})"
        if self.kind == "ikc":
            return f"ikc(k={self.k})"
        if self.kind == "external":
            return f"external({self.path})"
        return self.kind


def make_clustering(g: Graph, config: ClustererConfig) -> Clustering:
    """Run the configured clusterer on g."""
    if config.kind == "cpm":
        return optimize_partition(g, "cpm", config.resolution, config.seed)
    if config.kind == "modularity":
        return optimize_partition(g, "modularity", 0.0, config.seed)
    if config.kind == "ikc":
        return cluster_ikc(g, config.k)
    return load_clustering(config.path, g)
