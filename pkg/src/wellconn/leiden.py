"""Seeded multilevel optimizer for the two partition quality functions.

Structure: queue-driven local moves on the current level, split every
community into its connected components, aggregate, repeat until no
coarsening happens. A final polish phase alternates flat-level local moves
with component splitting until neither changes anything, which yields the
two exit guarantees: every cluster induces a connected subgraph, and no
single node move can improve the objective.

Quality never decreases: local moves apply only strict improvements,
splitting a disconnected community always raises both objectives, and
aggregation is a representation change.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .clustering import Clustering, relabel_sequential
from .errors import InvalidArgumentError
from .graph import Graph

# Floating-point guard for "strictly better": gains this small are treated
# as ties and never trigger a move, so runs cannot oscillate on noise.
EPS = 1e-11


@njit(cache=True, nogil=True)
def _fpush(heap, size, val):
    heap[size] = val
    i = size
    while i > 0:
        p = (i - 1) >> 1
        if heap[p] > heap[i]:
            heap[p], heap[i] = heap[i], heap[p]
            i = p
        else:
            break
    return size + 1


@njit(cache=True, nogil=True)
def _fpop(heap, size):
    top = heap[0]
    size -= 1
    heap[0] = heap[size]
    i = 0
    while True:
        l = 2 * i + 1
        rr = l + 1
        m = i
        if l < size and heap[l] < heap[m]:
            m = l
        if rr < size and heap[rr] < heap[m]:
            m = rr
        if m == i:
            break
        heap[m], heap[i] = heap[i], heap[m]
        i = m
    return top, size


@njit(cache=True, nogil=True)
def _local_move(indptr, indices, w, node_size, self_w, comm, order, use_cpm, r, m2):
    """One queue-driven local-move sweep; mutates comm, returns move count.

    Community ids live in 0..n-1. csize tracks original node counts per
    community, cdeg original degree sums; empty ids are kept in a min-heap
    so a node can open the smallest free id when leaving its group pays.
    """
    n = len(comm)
    csize = np.zeros(n, dtype=np.int64)
    cdeg = np.zeros(n, dtype=np.int64)
    deg = np.empty(n, dtype=np.int64)
    for v in range(n):
        s = np.int64(0)
        for j in range(indptr[v], indptr[v + 1]):
            s += w[j]
        deg[v] = s + 2 * self_w[v]
    for v in range(n):
        csize[comm[v]] += node_size[v]
        cdeg[comm[v]] += deg[v]

    free_heap = np.empty(n + 1, dtype=np.int64)
    in_heap = np.zeros(n, dtype=np.uint8)
    free_size = 0
    for cid in range(n):
        if csize[cid] == 0:
            free_size = _fpush(free_heap, free_size, cid)
            in_heap[cid] = 1

    queue = np.empty(n + 1, dtype=np.int64)
    in_queue = np.zeros(n, dtype=np.uint8)
    qh = 0
    qt = 0
    for i in range(n):
        queue[qt] = order[i]
        qt = (qt + 1) % (n + 1)
        in_queue[order[i]] = 1

    cw = np.zeros(n, dtype=np.int64)
    touched = np.empty(n, dtype=np.int64)
    moves = 0

    while qh != qt:
        v = queue[qh]
        qh = (qh + 1) % (n + 1)
        in_queue[v] = 0
        cur = comm[v]
        sv = node_size[v]
        dv = deg[v]
        csize[cur] -= sv
        cdeg[cur] -= dv

        ntouched = 0
        for j in range(indptr[v], indptr[v + 1]):
            cu = comm[indices[j]]
            if cw[cu] == 0:
                touched[ntouched] = cu
                ntouched += 1
            cw[cu] += w[j]

        if use_cpm:
            cur_score = cw[cur] - r * sv * csize[cur]
        else:
            cur_score = cw[cur] - dv * cdeg[cur] / m2
        best = cur
        best_score = cur_score
        for t in range(ntouched):
            cid = touched[t]
            if cid == cur:
                continue
            if use_cpm:
                sc = cw[cid] - r * sv * csize[cid]
            else:
                sc = cw[cid] - dv * cdeg[cid] / m2
            if sc > best_score + EPS or (sc >= best_score - EPS and best != cur and cid < best):
                best = cid
                best_score = sc
        # A free id is the empty-community candidate; score there is 0.
        if free_size > 0:
            fid = np.int64(-1)
            while free_size > 0:
                top = free_heap[0]
                if csize[top] == 0 and top != cur:
                    fid = top
                    break
                _, free_size = _fpop(free_heap, free_size)
                in_heap[top] = 0
            if fid >= 0:
                sc = 0.0
                if sc > best_score + EPS or (sc >= best_score - EPS and best != cur and fid < best):
                    best = fid
                    best_score = sc

        if best != cur and best_score > cur_score + EPS:
            comm[v] = best
            csize[best] += sv
            cdeg[best] += dv
            if csize[cur] == 0 and in_heap[cur] == 0:
                free_size = _fpush(free_heap, free_size, cur)
                in_heap[cur] = 1
            moves += 1
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if in_queue[u] == 0 and comm[u] != best:
                    queue[qt] = u
                    qt = (qt + 1) % (n + 1)
                    in_queue[u] = 1
        else:
            csize[cur] += sv
            cdeg[cur] += dv

        for t in range(ntouched):
            cw[touched[t]] = 0
    return moves


@njit(cache=True, nogil=True)
def _split_components(indptr, indices, comm):
    """Relabel so each connected component within a community is its own
    group; new labels are compact, ordered by smallest member id."""
    n = len(comm)
    out = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    label = 0
    for s in range(n):
        if out[s] != -1:
            continue
        out[s] = label
        stack[0] = s
        sp = 1
        while sp > 0:
            sp -= 1
            v = stack[sp]
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if out[u] == -1 and comm[u] == comm[v]:
                    out[u] = label
                    stack[sp] = u
                    sp += 1
        label += 1
    return out, label


@njit(cache=True, nogil=True)
def _aggregate(indptr, indices, w, node_size, self_w, comm, k):
    """Condense communities into super-nodes; returns the new level arrays."""
    n = len(comm)
    new_size = np.zeros(k, dtype=np.int64)
    new_self = np.zeros(k, dtype=np.int64)
    for v in range(n):
        new_size[comm[v]] += node_size[v]
        new_self[comm[v]] += self_w[v]
    inner2 = np.zeros(k, dtype=np.int64)
    cnt = 0
    for u in range(n):
        cu = comm[u]
        for j in range(indptr[u], indptr[u + 1]):
            cv = comm[indices[j]]
            if cu == cv:
                inner2[cu] += w[j]
            else:
                cnt += 1
    for c in range(k):
        new_self[c] += inner2[c] // 2
    key = np.empty(cnt, dtype=np.int64)
    wts = np.empty(cnt, dtype=np.int64)
    p = 0
    kk64 = np.int64(k)
    for u in range(n):
        cu = comm[u]
        for j in range(indptr[u], indptr[u + 1]):
            cv = comm[indices[j]]
            if cu != cv:
                key[p] = cu * kk64 + cv
                wts[p] = w[j]
                p += 1
    order = np.argsort(key)
    uniq = 0
    prev = np.int64(-1)
    for i in range(cnt):
        if key[order[i]] != prev:
            uniq += 1
            prev = key[order[i]]
    new_indptr = np.zeros(k + 1, dtype=np.int64)
    new_indices = np.empty(uniq, dtype=np.int64)
    new_w = np.empty(uniq, dtype=np.int64)
    prev = np.int64(-1)
    ui = -1
    for i in range(cnt):
        o = order[i]
        if key[o] != prev:
            ui += 1
            new_indices[ui] = key[o] % kk64
            new_w[ui] = wts[o]
            new_indptr[key[o] // kk64 + 1] += 1
            prev = key[o]
        else:
            new_w[ui] += wts[o]
    for c in range(k):
        new_indptr[c + 1] += new_indptr[c]
    return new_indptr, new_indices, new_w, new_size, new_self


def _distinct(comm: np.ndarray) -> int:
    return len(np.unique(comm))


def optimize_partition(g: Graph, objective: str, resolution: float, seed: int) -> Clustering:
    """Maximize the chosen objective; deterministic for a fixed seed.

    objective is "cpm" (needs resolution > 0) or "modularity" (needs >= 1
    edge). Every output cluster induces a connected subgraph and no single
    node move improves the objective. All nodes are assigned, singleton
    communities included.
    """
    if objective not in ("cpm", "modularity"):
        raise InvalidArgumentError(f"unknown objective: {objective!r}")
    use_cpm = objective == "cpm"
    if use_cpm and resolution <= 0:
        raise InvalidArgumentError("resolution must be positive")
    if not use_cpm and g.edge_count == 0:
        raise InvalidArgumentError("modularity needs at least one edge")
    if seed < 0:
        raise InvalidArgumentError("seed must be non-negative")
    n = g.node_count
    if n == 0:
        raise InvalidArgumentError("graph is empty")
    m2 = 2.0 * g.edge_count
    r = float(resolution)

    indptr = g.indptr
    indices = g.indices
    w = np.ones(len(indices), dtype=np.int64)
    node_size = np.ones(n, dtype=np.int64)
    self_w = np.zeros(n, dtype=np.int64)
    flat = np.arange(n, dtype=np.int64)
    level = 0
    while True:
        cur_n = len(node_size)
        order = np.random.default_rng([seed, level]).permutation(cur_n).astype(np.int64)
        comm = np.arange(cur_n, dtype=np.int64)
        _local_move(indptr, indices, w, node_size, self_w, comm, order, use_cpm, r, m2)
        refined, k = _split_components(indptr, indices, comm)
        if k == cur_n:
            break
        flat = refined[flat]
        indptr, indices, w, node_size, self_w = _aggregate(
            indptr, indices, w, node_size, self_w, refined, k
        )
        level += 1

    # Flat polish: enforce single-node optimality and connectivity together.
    comm = flat.copy()
    comm, _ = _split_components(g.indptr, g.indices, comm)
    ones_w = np.ones(len(g.indices), dtype=np.int64)
    ones_s = np.ones(n, dtype=np.int64)
    zero_self = np.zeros(n, dtype=np.int64)
    rnd = 0
    while True:
        order = np.random.default_rng([seed, 1_000_000 + rnd]).permutation(n).astype(np.int64)
        moves = _local_move(g.indptr, g.indices, ones_w, ones_s, zero_self, comm, order, use_cpm, r, m2)
        before = _distinct(comm)
        comm, k = _split_components(g.indptr, g.indices, comm)
        if moves == 0 and k == before:
            break
        rnd += 1

    groups: dict[str, list[str]] = {}
    for v in range(n):
        groups.setdefault(str(comm[v]), []).append(g.labels[v])
    return relabel_sequential(Clustering(g.labels, groups))
