"""Clustering agreement metrics: NMI, AMI, and ARI.

All three operate on two clusterings over the same node universe; nodes
outside any cluster are materialized as singletons first. Conventions for
degenerate inputs follow the widely used reference behavior: two trivial
one-group clusterings score 1.0, and ARI returns 1.0 whenever the two
pair partitions agree perfectly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .clustering import Clustering
from .errors import InvalidArgumentError

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class ContingencyTable:
    """Sparse cross-tabulation of two clusterings plus marginals."""

    n: int
    a: np.ndarray
    b: np.ndarray
    cells: dict[tuple[int, int], int]

    @property
    def n_rows(self) -> int:
        return len(self.a)

    @property
    def n_cols(self) -> int:
        return len(self.b)


def contingency(u: Clustering, v: Clustering) -> ContingencyTable:
    """Build the contingency table; implicit singletons become groups."""
    if u.universe != v.universe:
        raise InvalidArgumentError("clusterings cover different node universes")
    n = u.n_nodes
    if n == 0:
        raise InvalidArgumentError("empty node universe")
    ug = u.materialized_groups()
    vg = v.materialized_groups()
    uidx: dict[str, int] = {}
    for i, ms in enumerate(ug):
        for lab in ms:
            uidx[lab] = i
    vidx: dict[str, int] = {}
    for j, ms in enumerate(vg):
        for lab in ms:
            vidx[lab] = j
    cells: dict[tuple[int, int], int] = {}
    for lab in u.universe:
        key = (uidx[lab], vidx[lab])
        cells[key] = cells.get(key, 0) + 1
    a = np.array([len(ms) for ms in ug], dtype=np.int64)
    b = np.array([len(ms) for ms in vg], dtype=np.int64)
    return ContingencyTable(n=n, a=a, b=b, cells=cells)


def _mutual_information(ct: ContingencyTable) -> float:
    n = float(ct.n)
    total = 0.0
    for (i, j), nij in ct.cells.items():
        total += (nij / n) * np.log(n * nij / (float(ct.a[i]) * float(ct.b[j])))
    return float(total)


def _entropy(sizes: np.ndarray, n: int) -> float:
    p = sizes / float(n)
    return float(-np.sum(p * np.log(p)))


def _log_comb(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _expected_mi(ct: ContingencyTable) -> float:
    """Exact expectation of MI under the fixed-marginals permutation model.

    Grouped by unique (row size, column size) pair: the inner sum over the
    hypergeometric support depends only on the sizes, so each distinct pair
    is evaluated once and weighted by its multiplicity.
    """
    n = ct.n
    ua, ca = np.unique(ct.a, return_counts=True)
    ub, cb = np.unique(ct.b, return_counts=True)
    logn = np.log(n)
    emi = 0.0
    for av, ac in zip(ua, ca):
        for bv, bc in zip(ub, cb):
            start = max(1, int(av + bv) - n)
            end = int(min(av, bv))
            if start > end:
                continue
            nij = np.arange(start, end + 1, dtype=np.float64)
            log_p = (
                _log_comb(float(bv), nij)
                + _log_comb(float(n - bv), av - nij)
                - _log_comb(float(n), float(av))
            )
            term = (nij / n) * (logn + np.log(nij) - np.log(float(av) * float(bv)))
            emi += float(ac) * float(bc) * float(np.sum(term * np.exp(log_p)))
    return emi


def nmi(u: Clustering, v: Clustering) -> float:
    """Mutual information over the arithmetic mean of the two entropies."""
    ct = contingency(u, v)
    if ct.n_rows == 1 and ct.n_cols == 1:
        return 1.0
    mi = _mutual_information(ct)
    normalizer = 0.5 * (_entropy(ct.a, ct.n) + _entropy(ct.b, ct.n))
    return mi / max(normalizer, _EPS)


def ami(u: Clustering, v: Clustering) -> float:
    """Chance-adjusted mutual information, exact hypergeometric expectation."""
    ct = contingency(u, v)
    if ct.n_rows == 1 and ct.n_cols == 1:
        return 1.0
    mi = _mutual_information(ct)
    emi = _expected_mi(ct)
    normalizer = 0.5 * (_entropy(ct.a, ct.n) + _entropy(ct.b, ct.n))
    denominator = normalizer - emi
    if denominator < 0:
        denominator = min(denominator, -_EPS)
    else:
        denominator = max(denominator, _EPS)
    return (mi - emi) / denominator


def ari(u: Clustering, v: Clustering) -> float:
    """Adjusted Rand index via exact integer pair counts."""
    ct = contingency(u, v)
    tp2 = sum(nij * (nij - 1) for nij in ct.cells.values())
    a2 = int(np.sum(ct.a * (ct.a - 1)))
    b2 = int(np.sum(ct.b * (ct.b - 1)))
    n2 = ct.n * (ct.n - 1)
    tp = tp2 // 2
    fn = a2 // 2 - tp
    fp = b2 // 2 - tp
    tn = n2 // 2 - tp - fn - fp
    if fn == 0 and fp == 0:
        return 1.0
    return 2.0 * (tp * tn - fn * fp) / float((tp + fn) * (fn + tn) + (tp + fp) * (fp + tn))
