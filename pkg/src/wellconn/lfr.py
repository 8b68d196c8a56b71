"""Estimate synthetic-benchmark generator parameters from a real network.

Eight quantities describe a network:clustering pair for LFR-style
generators: node count, average and maximum degree, the power-law
exponents of the degree and community-size distributions, the community
size range, and the mixing parameter (the average fraction of a node's
edges that leave its community).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from .clustering import Clustering
from .errors import DegenerateDistributionError, InvalidArgumentError, SampleSizeError
from .graph import Graph


@dataclass(frozen=True)
class PowerLawFit:
    """Discrete power-law tail fit: exponent, cutoff, and fit quality."""

    alpha: float
    x_min: int
    ks_distance: float
    n_tail: int


@dataclass(frozen=True)
class LFRParams:
    """The eight generator parameters plus fit diagnostics.

    Fields that could not be estimated are None, with the reason recorded
    in `errors` under the field name.
    """

    N: int
    k: float
    k_max: int
    tau1: float | None
    tau2: float | None
    c_min: int | None
    c_max: int | None
    mu: float
    degree_fit: PowerLawFit | None
    community_fit: PowerLawFit | None
    errors: dict[str, str]

    def to_dict(self) -> dict:
        def fit_dict(f: PowerLawFit | None):
            if f is None:
                return None
            return {
                "alpha": f.alpha,
                "x_min": f.x_min,
                "ks_distance": f.ks_distance,
                "n_tail": f.n_tail,
            }

        return {
            "N": self.N,
            "k": self.k,
            "k_max": self.k_max,
            "tau1": self.tau1,
            "tau2": self.tau2,
            "c_min": self.c_min,
            "c_max": self.c_max,
            "mu": self.mu,
            "degree_fit": fit_dict(self.degree_fit),
            "community_fit": fit_dict(self.community_fit),
            "errors": dict(sorted(self.errors.items())),
        }


def mixing_parameter(g: Graph, c: Clustering) -> float:
    """Mean over non-isolated nodes of the external-edge fraction.

    A node outside every cluster counts as its own singleton community, so
    all of its edges are external.
    """
    if g.edge_count == 0:
        raise InvalidArgumentError("mixing parameter needs at least one edge")
    if c.universe != set(g.labels):
        raise InvalidArgumentError("clustering universe does not match graph nodes")
    total = 0.0
    counted = 0
    for v in range(g.node_count):
        nbr = g.neighbors(v)
        if len(nbr) == 0:
            continue
        own = c.cluster_of(g.labels[v])
        if own is None:
            ext = len(nbr)
        else:
            ext = sum(1 for u in nbr if c.cluster_of(g.labels[int(u)]) != own)
        total += ext / len(nbr)
        counted += 1
    return total / counted


def _neg_log_likelihood(alpha: float, x_min: int, log_sum: float, n: int) -> float:
    return n * math.log(zeta(alpha, x_min)) + alpha * log_sum


def _fit_tail(tail: np.ndarray, x_min: int) -> tuple[float, float]:
    """MLE exponent and KS distance for one cutoff; tail is sorted."""
    n = len(tail)
    log_sum = float(np.sum(np.log(tail)))
    res = minimize_scalar(
        _neg_log_likelihood,
        bounds=(1.000001, 25.0),
        args=(x_min, log_sum, n),
        method="bounded",
        options={"xatol": 1e-9},
    )
    alpha = float(res.x)
    values, counts = np.unique(tail, return_counts=True)
    emp_cdf = np.cumsum(counts) / n
    z0 = zeta(alpha, x_min)
    fit_cdf = 1.0 - zeta(alpha, values + 1) / z0
    ks = float(np.max(np.abs(emp_cdf - fit_cdf)))
    return alpha, ks


def fit_power_law_discrete(samples) -> PowerLawFit:
    """Fit a discrete power law with an estimated tail cutoff.

    Scans candidate cutoffs over the distinct sample values whose tail
    holds at least a tenth of the sample (never fewer than 25 points), fits
    the exponent by maximum likelihood on each tail, and keeps the cutoff
    with the smallest KS distance, breaking ties toward the smaller cutoff.
    The minimum-tail floor only binds for small samples; above 250 points
    the one-tenth rule dominates, which keeps the scan stable under sample
    duplication.
    """
    arr = np.asarray(list(samples), dtype=np.int64)
    if len(arr) and np.any(arr < 1):
        raise InvalidArgumentError("samples must be positive integers")
    # A constant sample is degenerate no matter how large it is, so this
    # check outranks the size check.
    distinct = np.unique(arr)
    if len(arr) and len(distinct) < 2:
        raise DegenerateDistributionError("all samples are equal")
    if len(arr) < 50:
        raise SampleSizeError(f"need at least 50 samples, got {len(arr)}")
    arr.sort()
    n = len(arr)
    min_tail = max(25, -(-n // 10))
    best: PowerLawFit | None = None
    for x_min in distinct:
        lo = int(np.searchsorted(arr, x_min, side="left"))
        tail = arr[lo:]
        if len(tail) < min_tail:
            break
        if tail[0] == tail[-1]:
            continue
        alpha, ks = _fit_tail(tail, int(x_min))
        if best is None or ks < best.ks_distance - 1e-15:
            best = PowerLawFit(alpha=alpha, x_min=int(x_min), ks_distance=ks, n_tail=len(tail))
    if best is None:
        # Every admissible tail was constant; fall back to the full sample.
        alpha, ks = _fit_tail(arr, int(distinct[0]))
        best = PowerLawFit(alpha=alpha, x_min=int(distinct[0]), ks_distance=ks, n_tail=n)
    return best


def estimate_params(g: Graph, c: Clustering) -> LFRParams:
    """All eight parameters for a graph and its clustering.

    Power-law fit failures do not abort the estimate; the affected field
    comes back None with the reason in `errors`.
    """
    if g.node_count == 0:
        raise InvalidArgumentError("graph is empty")
    sizes = [len(ms) for ms in c.clusters.values() if len(ms) >= 2]
    if not sizes:
        raise InvalidArgumentError("clustering has no non-singleton cluster")
    degrees = g.degrees()
    errors: dict[str, str] = {}

    tau1 = None
    degree_fit = None
    try:
        degree_fit = fit_power_law_discrete(degrees[degrees > 0])
        tau1 = degree_fit.alpha
    except (DegenerateDistributionError, SampleSizeError) as e:
        errors["tau1"] = str(e)

    tau2 = None
    community_fit = None
    try:
        community_fit = fit_power_law_discrete(sizes)
        tau2 = community_fit.alpha
    except (DegenerateDistributionError, SampleSizeError) as e:
        errors["tau2"] = str(e)

    return LFRParams(
        N=g.node_count,
        k=2.0 * g.edge_count / g.node_count,
        k_max=int(degrees.max()) if g.node_count else 0,
        tau1=tau1,
        tau2=tau2,
        c_min=min(sizes),
        c_max=max(sizes),
        mu=mixing_parameter(g, c),
        degree_fit=degree_fit,
        community_fit=community_fit,
        errors=errors,
    )
