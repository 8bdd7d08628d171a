"""Numba kernels for the per-edge heavy lifting.

Everything here works on the CSR arrays of a Graph (int64 indptr/indices,
strictly ascending neighbor rows) and on canonical edge arrays. All kernels
are deterministic and free of Python-object state, so chunked execution
reassembled in index order is bit-identical to a single pass.

Bitmask words use 63 bits of an int64 (the sign bit stays clear).
"""

from __future__ import annotations

import numpy as np
from numba import njit

_INF = np.int64(1) << 60
_BITS = 63


@njit(cache=True, nogil=True)
def common_neighbor_counts(indptr, indices, eu, ev, start, end, out):
    """out[k] = |N(eu[k]) & N(ev[k])| for k in [start, end), by sorted merge."""
    for k in range(start, end):
        u = eu[k]
        v = ev[k]
        ia = indptr[u]
        ea = indptr[u + 1]
        ib = indptr[v]
        eb = indptr[v + 1]
        c = 0
        while ia < ea and ib < eb:
            x = indices[ia]
            y = indices[ib]
            if x == y:
                c += 1
                ia += 1
                ib += 1
            elif x < y:
                ia += 1
            else:
                ib += 1
        out[k] = c


@njit(cache=True, nogil=True)
def _contains(indices, lo, hi, x):
    # binary search in indices[lo:hi]
    while lo < hi:
        mid = (lo + hi) // 2
        y = indices[mid]
        if y == x:
            return True
        if y < x:
            lo = mid + 1
        else:
            hi = mid
    return False


@njit(cache=True, nogil=True)
def four_cycle_stats(indptr, indices, u, v):
    """(s_uv, s_vu, gamma_max) for edge (u, v).

    s_uv counts neighbors k of u (k != v, k not adjacent to v) lying on at
    least one diagonal-free 4-cycle u-k-w-v; gamma_max is the largest number
    of such cycles through any single intermediate node, 0 if there are none.
    """
    au, bu = indptr[u], indptr[u + 1]
    av, bv = indptr[v], indptr[v + 1]
    nk = 0
    nw = 0
    K = np.empty(bu - au, dtype=np.int64)
    W = np.empty(bv - av, dtype=np.int64)
    for t in range(au, bu):
        k = indices[t]
        if k != v and not _contains(indices, av, bv, k):
            K[nk] = k
            nk += 1
    for t in range(av, bv):
        w = indices[t]
        if w != u and not _contains(indices, au, bu, w):
            W[nw] = w
            nw += 1
    s_uv = 0
    s_vu = 0
    gamma = 0
    for t in range(nk):
        k = K[t]
        # |N(k) & W| by sorted merge (K and W inherit sortedness)
        ia = indptr[k]
        ea = indptr[k + 1]
        ib = 0
        c = 0
        while ia < ea and ib < nw:
            x = indices[ia]
            y = W[ib]
            if x == y:
                c += 1
                ia += 1
                ib += 1
            elif x < y:
                ia += 1
            else:
                ib += 1
        if c > 0:
            s_uv += 1
            if c > gamma:
                gamma = c
    for t in range(nw):
        w = W[t]
        ia = indptr[w]
        ea = indptr[w + 1]
        ib = 0
        c = 0
        while ia < ea and ib < nk:
            x = indices[ia]
            y = K[ib]
            if x == y:
                c += 1
                ia += 1
                ib += 1
            elif x < y:
                ia += 1
            else:
                ib += 1
        if c > 0:
            s_vu += 1
            if c > gamma:
                gamma = c
    return s_uv, s_vu, gamma


@njit(cache=True, nogil=True)
def square_terms(indptr, indices, eu, ev, start, end, out):
    """out[k] = (s_uv + s_vu) / (gamma_max * max(n_u, n_v)), or 0 if no
    diagonal-free 4-cycle exists. This is the BFC - LRC gap term."""
    for k in range(start, end):
        u = eu[k]
        v = ev[k]
        s_uv, s_vu, gamma = four_cycle_stats(indptr, indices, u, v)
        if s_uv + s_vu == 0:
            out[k] = 0.0
        else:
            du = indptr[u + 1] - indptr[u]
            dv = indptr[v + 1] - indptr[v]
            dmax = du if du > dv else dv
            out[k] = (s_uv + s_vu) / (gamma * dmax)


@njit(cache=True, nogil=True)
def _support_costs(indptr, indices, u, v, C, sinkmask, touched, d2, adj, words):
    """Fill C[:a, :b] with graph distances between N(u) and N(v).

    For support pairs of an edge the distance is 0 (same node), 1 (adjacent),
    2 (shared neighbor) or else exactly 3 (path a-u-v-b), which is what a
    depth-3 BFS would report.
    """
    au, bu = indptr[u], indptr[u + 1]
    av, bv = indptr[v], indptr[v + 1]
    a = bu - au
    b = bv - av
    ntouch = 0
    for jb in range(b):
        w = indices[av + jb]
        wd = jb // _BITS
        bit = np.int64(1) << (jb % _BITS)
        for t in range(indptr[w], indptr[w + 1]):
            x = indices[t]
            sinkmask[x, wd] |= bit
            touched[ntouch] = x
            ntouch += 1
    for ia in range(a):
        src = indices[au + ia]
        for wd in range(words):
            d2[wd] = 0
            adj[wd] = 0
        for t in range(indptr[src], indptr[src + 1]):
            x = indices[t]
            for wd in range(words):
                d2[wd] |= sinkmask[x, wd]
        # mark sinks adjacent to src by merging N(src) with N(v)
        ia2 = indptr[src]
        ea2 = indptr[src + 1]
        jb2 = 0
        while ia2 < ea2 and jb2 < b:
            x = indices[ia2]
            y = indices[av + jb2]
            if x == y:
                adj[jb2 // _BITS] |= np.int64(1) << (jb2 % _BITS)
                ia2 += 1
                jb2 += 1
            elif x < y:
                ia2 += 1
            else:
                jb2 += 1
        for jb in range(b):
            snk = indices[av + jb]
            if snk == src:
                C[ia, jb] = 0
            elif (adj[jb // _BITS] >> (jb % _BITS)) & 1:
                C[ia, jb] = 1
            elif (d2[jb // _BITS] >> (jb % _BITS)) & 1:
                C[ia, jb] = 2
            else:
                C[ia, jb] = 3
    for t in range(ntouch):
        x = touched[t]
        for wd in range(words):
            sinkmask[x, wd] = 0
    return a, b


@njit(cache=True, nogil=True)
def _transport_min_cost(C, a, b, supply, demand, flow, pot, dist, prev, vis):
    """Exact integral transportation optimum by successive shortest paths.

    Sources 0..a-1 carry ``supply`` units each, sinks a..a+b-1 take
    ``demand`` each; arc costs C[ia, jb] are small non-negative integers.
    Dense Dijkstra with Johnson potentials; all arithmetic int64.
    """
    nn = a + b
    total_cost = np.int64(0)
    remaining = np.int64(0)
    for ia in range(a):
        remaining += supply[ia]
    for x in range(nn):
        pot[x] = 0
    while remaining > 0:
        s0 = -1
        for ia in range(a):
            if supply[ia] > 0:
                s0 = ia
                break
        for x in range(nn):
            dist[x] = _INF
            prev[x] = -1
            vis[x] = False
        dist[s0] = 0
        target = -1
        while True:
            best = -1
            bestd = _INF
            for x in range(nn):
                if not vis[x] and dist[x] < bestd:
                    bestd = dist[x]
                    best = x
            if best < 0:
                break
            vis[best] = True
            if best >= a and demand[best - a] > 0:
                target = best
                break
            if best < a:
                for jb in range(b):
                    nd = dist[best] + C[best, jb] + pot[best] - pot[a + jb]
                    if nd < dist[a + jb]:
                        dist[a + jb] = nd
                        prev[a + jb] = best
            else:
                jb = best - a
                for ia in range(a):
                    if flow[ia, jb] > 0:
                        nd = dist[best] - C[ia, jb] + pot[best] - pot[ia]
                        if nd < dist[ia]:
                            dist[ia] = nd
                            prev[ia] = best
        # supports of adjacent nodes always admit a finite-cost plan
        D = dist[target]
        for x in range(nn):
            dx = dist[x]
            pot[x] += dx if dx < D else D
        push = supply[s0]
        if demand[target - a] < push:
            push = demand[target - a]
        x = target
        while x != s0:
            p = prev[x]
            if p >= a:
                # backward arc p(sink) -> x(source): capacity = current flow
                f = flow[x, p - a]
                if f < push:
                    push = f
            x = p
        x = target
        while x != s0:
            p = prev[x]
            if p < a:
                flow[p, x - a] += push
            else:
                flow[x, p - a] -= push
            x = p
        supply[s0] -= push
        demand[target - a] -= push
        remaining -= push
    for ia in range(a):
        for jb in range(b):
            f = flow[ia, jb]
            if f > 0:
                total_cost += f * C[ia, jb]
    return total_cost


@njit(cache=True, nogil=True)
def w1_numerators(indptr, indices, eu, ev, start, end, n, maxdeg, out_num, out_den):
    """Exact scaled Wasserstein-1 between endpoint neighbor measures.

    For edge (u, v) with degrees a, b: masses are scaled by a*b so every
    supply/demand is integral; out_num[k] is the exact integer optimal
    transport cost and out_den[k] = a*b. W1 = out_num / out_den.
    """
    words = (maxdeg + _BITS - 1) // _BITS
    sinkmask = np.zeros((n, words), dtype=np.int64)
    touched = np.empty(maxdeg * maxdeg + 1, dtype=np.int64)
    d2 = np.empty(words, dtype=np.int64)
    adj = np.empty(words, dtype=np.int64)
    C = np.empty((maxdeg, maxdeg), dtype=np.int64)
    flow = np.empty((maxdeg, maxdeg), dtype=np.int64)
    supply = np.empty(maxdeg, dtype=np.int64)
    demand = np.empty(maxdeg, dtype=np.int64)
    pot = np.empty(2 * maxdeg, dtype=np.int64)
    dist = np.empty(2 * maxdeg, dtype=np.int64)
    prev = np.empty(2 * maxdeg, dtype=np.int64)
    vis = np.empty(2 * maxdeg, dtype=np.bool_)
    for k in range(start, end):
        u = eu[k]
        v = ev[k]
        a, b = _support_costs(indptr, indices, u, v, C, sinkmask, touched, d2, adj, words)
        for ia in range(a):
            supply[ia] = b
        for jb in range(b):
            demand[jb] = a
        for ia in range(a):
            for jb in range(b):
                flow[ia, jb] = 0
        cost = _transport_min_cost(C, a, b, supply, demand, flow, pot, dist, prev, vis)
        out_num[k] = cost
        out_den[k] = a * b
