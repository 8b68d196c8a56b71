"""Exact global minimum edge cut for undirected simple graphs.

The solver maintains a contracted weighted multigraph. Each round runs a
maximum-adjacency scan that labels every edge (u, v) with a lower bound
q(e) on the connectivity between u and v; edges with q(e) at or above the
best cut found so far can be contracted without losing every optimal cut,
because a certificate for the current best is kept aside. The minimum
weighted super-node degree after each rebuild is itself a cut of the input
graph, which is where the best value and its certificate come from. The
last vertex of each scan always yields at least one contractible edge, so
the number of rounds is bounded by the node count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InvalidArgumentError, SizeLimitError
from .graph import Graph, connected_components


@dataclass(frozen=True)
class CutResult:
    """A global minimum cut: weight, the two sides, and the crossing edges.

    `light` is the smaller side; on equal sizes, the side whose sorted label
    tuple is lexicographically smaller. All tuples are sorted. `edges` holds
    the cut edges as ordered label pairs; len(edges) == weight always, and
    weight 0 (disconnected input) comes with no edges.
    """

    weight: int
    light: tuple[str, ...]
    heavy: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]


@njit(cache=True, nogil=True)
def _uf_find(parent, v):
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


@njit(cache=True, nogil=True)
def _hpush(hp, hv, size, p, v):
    i = size
    hp[i] = p
    hv[i] = v
    while i > 0:
        par = (i - 1) >> 1
        if hp[par] < hp[i]:
            hp[par], hp[i] = hp[i], hp[par]
            hv[par], hv[i] = hv[i], hv[par]
            i = par
        else:
            break
    return size + 1


@njit(cache=True, nogil=True)
def _hpop(hp, hv, size):
    v = hv[0]
    size -= 1
    hp[0] = hp[size]
    hv[0] = hv[size]
    i = 0
    while True:
        l = 2 * i + 1
        r = l + 1
        m = i
        if l < size and hp[l] > hp[m]:
            m = l
        if r < size and hp[r] > hp[m]:
            m = r
        if m == i:
            break
        hp[m], hp[i] = hp[i], hp[m]
        hv[m], hv[i] = hv[i], hv[m]
        i = m
    return v, size


@njit(cache=True, nogil=True)
def _noi_mincut(indptr, indices, n):
    # Working CSR over super-nodes; all weights start at 1.
    cur_indptr = indptr
    cur_indices = indices
    cur_w = np.ones(len(indices), dtype=np.int64)
    cur_n = n

    # Member lists (original vertices per super-node) for cut certificates.
    head = np.arange(n, dtype=np.int64)
    tail = np.arange(n, dtype=np.int64)
    nxt = np.full(n, -1, dtype=np.int64)

    best_w = np.int64(1) << 62
    best_mask = np.zeros(n, dtype=np.bool_)
    packn = np.int64(n + 1)

    while cur_n > 1:
        deg = np.zeros(cur_n, dtype=np.int64)
        for v in range(cur_n):
            s = np.int64(0)
            for j in range(cur_indptr[v], cur_indptr[v + 1]):
                s += cur_w[j]
            deg[v] = s
        argmin = 0
        for v in range(1, cur_n):
            if deg[v] < deg[argmin]:
                argmin = v
        if deg[argmin] < best_w:
            best_w = deg[argmin]
            for i in range(n):
                best_mask[i] = False
            u = head[argmin]
            while u != -1:
                best_mask[u] = True
                u = nxt[u]
        lam = best_w

        # Maximum-adjacency scan. r[y] tracks connectivity of y to the
        # scanned set; the heap priority packs (r, smaller-index-first).
        r = np.zeros(cur_n, dtype=np.int64)
        scanned = np.zeros(cur_n, dtype=np.uint8)
        parent = np.arange(cur_n, dtype=np.int64)
        cap = len(cur_indices) + 2
        hp = np.empty(cap, dtype=np.int64)
        hv = np.empty(cap, dtype=np.int64)
        hs = 0
        hs = _hpush(hp, hv, hs, packn - 1, 0)
        nscanned = 0
        merged = False
        bq = np.int64(-1)
        bx = np.int64(0)
        by = np.int64(0)
        while nscanned < cur_n:
            x = np.int64(-1)
            while hs > 0:
                v, hs = _hpop(hp, hv, hs)
                if scanned[v] == 0:
                    x = v
                    break
            if x == -1:
                for v in range(cur_n):
                    if scanned[v] == 0:
                        x = v
                        break
            scanned[x] = 1
            nscanned += 1
            for j in range(cur_indptr[x], cur_indptr[x + 1]):
                y = cur_indices[j]
                if scanned[y] == 1:
                    continue
                q = r[y] + cur_w[j]
                if q >= lam:
                    rx = _uf_find(parent, x)
                    ry = _uf_find(parent, y)
                    if rx != ry:
                        if rx < ry:
                            parent[ry] = rx
                        else:
                            parent[rx] = ry
                        merged = True
                if q > bq:
                    bq = q
                    bx = x
                    by = y
                r[y] = q
                hs = _hpush(hp, hv, hs, q * packn + (packn - 1 - y), y)
        if not merged:
            # Unreachable when the scan covers a connected graph; kept so the
            # round count stays strictly decreasing no matter what.
            rx = _uf_find(parent, bx)
            ry = _uf_find(parent, by)
            if rx < ry:
                parent[ry] = rx
            elif ry < rx:
                parent[rx] = ry

        # Rebuild the condensed graph. New ids follow increasing root order.
        newid = np.full(cur_n, -1, dtype=np.int64)
        new_n = 0
        for v in range(cur_n):
            if _uf_find(parent, v) == v:
                newid[v] = new_n
                new_n += 1
        nh = np.full(new_n, -1, dtype=np.int64)
        nt = np.full(new_n, -1, dtype=np.int64)
        for v in range(cur_n):
            gid = newid[_uf_find(parent, v)]
            if nh[gid] == -1:
                nh[gid] = head[v]
                nt[gid] = tail[v]
            else:
                nxt[nt[gid]] = head[v]
                nt[gid] = tail[v]
        head = nh
        tail = nt

        cnt = 0
        for u in range(cur_n):
            ru = newid[_uf_find(parent, u)]
            for j in range(cur_indptr[u], cur_indptr[u + 1]):
                if ru != newid[_uf_find(parent, cur_indices[j])]:
                    cnt += 1
        key = np.empty(cnt, dtype=np.int64)
        wts = np.empty(cnt, dtype=np.int64)
        k = 0
        nn = np.int64(new_n)
        for u in range(cur_n):
            ru = newid[_uf_find(parent, u)]
            for j in range(cur_indptr[u], cur_indptr[u + 1]):
                rv = newid[_uf_find(parent, cur_indices[j])]
                if ru != rv:
                    key[k] = ru * nn + rv
                    wts[k] = cur_w[j]
                    k += 1
        order = np.argsort(key)
        uniq = 0
        prev = np.int64(-1)
        for i in range(cnt):
            kk = key[order[i]]
            if kk != prev:
                uniq += 1
                prev = kk
        m_indptr = np.zeros(new_n + 1, dtype=np.int64)
        new_indices = np.empty(uniq, dtype=np.int64)
        new_w = np.empty(uniq, dtype=np.int64)
        prev = np.int64(-1)
        ui = -1
        for i in range(cnt):
            o = order[i]
            kk = key[o]
            if kk != prev:
                ui += 1
                new_indices[ui] = kk % nn
                new_w[ui] = wts[o]
                m_indptr[kk // nn + 1] += 1
                prev = kk
            else:
                new_w[ui] += wts[o]
        for v in range(new_n):
            m_indptr[v + 1] += m_indptr[v]
        cur_indptr = m_indptr
        cur_indices = new_indices
        cur_w = new_w
        cur_n = new_n

    return best_w, best_mask


def _canonical(g: Graph, weight: int, side_labels: frozenset[str]) -> CutResult:
    other = frozenset(g.labels) - side_labels
    a = tuple(sorted(side_labels))
    b = tuple(sorted(other))
    if (len(a), a) > (len(b), b):
        a, b = b, a
    crossing = tuple(cut_edges(g, frozenset(a)))
    return CutResult(weight=weight, light=a, heavy=b, edges=crossing)


def minimum_cut(g: Graph) -> CutResult:
    """Global minimum cut of `g`. Disconnected graphs have weight 0.

    Requires at least 2 nodes. For weight 0 the light side is the smallest
    component (ties by smallest label).
    """
    n = g.node_count
    if n < 2:
        raise InvalidArgumentError("minimum cut needs at least 2 nodes")
    comps = connected_components(g)
    if len(comps) > 1:
        small = min(comps, key=lambda c: (len(c), min(g.labels[v] for v in c)))
        return _canonical(g, 0, frozenset(g.labels[v] for v in small))
    w, mask = _noi_mincut(g.indptr, g.indices, n)
    side = frozenset(g.labels[v] for v in np.flatnonzero(mask))
    return _canonical(g, int(w), side)


def cut_weight(g: Graph, side: frozenset[str] | set[str]) -> int:
    """Number of edges with exactly one endpoint in `side`."""
    ids = {g.id_of(lab) for lab in side}
    w = 0
    for u in ids:
        for v in g.neighbors(u):
            if int(v) not in ids:
                w += 1
    return w


def cut_edges(g: Graph, side: frozenset[str] | set[str]) -> list[tuple[str, str]]:
    """The edges crossing the cut, as label pairs ordered within each pair."""
    ids = {g.id_of(lab) for lab in side}
    out = []
    for u in ids:
        for v in g.neighbors(u):
            if int(v) not in ids:
                a, b = g.labels[u], g.labels[int(v)]
                out.append((a, b) if a < b else (b, a))
    return sorted(out)


def brute_force_minimum_cut(g: Graph) -> CutResult:
    """Reference solver: enumerates every bipartition. Limited to 20 nodes.

    Among all minimum cuts, returns the one minimizing (light size, light
    label tuple). Used as the independent check for the fast solver.
    """
    n = g.node_count
    if n < 2:
        raise InvalidArgumentError("minimum cut needs at least 2 nodes")
    if n > 20:
        raise SizeLimitError(f"brute force limited to 20 nodes, got {n}")
    adj = [0] * n
    for u, v in g.edges():
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    full = (1 << n) - 1
    # Each bipartition appears exactly once as the side excluding node n-1.
    best_w = None
    for s in range(1, 1 << (n - 1)):
        comp = (~s) & full
        w = 0
        m = s
        while m:
            v = (m & -m).bit_length() - 1
            w += (adj[v] & comp).bit_count()
            m &= m - 1
        if best_w is None or w < best_w:
            best_w = w
    cands = []
    for s in range(1, 1 << (n - 1)):
        comp = (~s) & full
        w = 0
        m = s
        while m:
            v = (m & -m).bit_length() - 1
            w += (adj[v] & comp).bit_count()
            m &= m - 1
        if w == best_w:
            res = _canonical(g, w, frozenset(g.labels[v] for v in range(n) if s >> v & 1))
            cands.append(res)
    return min(cands, key=lambda c: (len(c.light), c.light))
