"""Compiled inner loops. Only the Berge-girth cleanup is hot enough to need it."""

from __future__ import annotations

import numba as nb
import numpy as np


@nb.njit(cache=True)
def greedy_girth_filter(N, edges, g, maxdeg):
    """Insert hyperedges in row order, skipping any that would close a Berge cycle of length <= g.

    Multi-source BFS from the new edge's vertices through already kept edges;
    each source carries its own label, and two labels meeting at distance d1, d2
    certify a Berge cycle of length d1 + d2 + 2 through the new edge.
    """
    m, s = edges.shape
    inc = np.full((N, max(maxdeg, 1)), -1, np.int64)
    deg = np.zeros(N, np.int64)
    keep = np.zeros(m, np.bool_)
    src_v = np.full(N, -1, np.int64)
    dist_v = np.zeros(N, np.int64)
    stamp_v = np.zeros(N, np.int64)
    stamp_e = np.zeros(m, np.int64)
    qv = np.empty(N, np.int64)
    st = 0
    for i in range(m):
        st += 1
        head = 0
        tail = 0
        for j in range(s):
            v = edges[i, j]
            stamp_v[v] = st
            src_v[v] = j
            dist_v[v] = 0
            qv[tail] = v
            tail += 1
        bad = False
        while head < tail and not bad:
            v = qv[head]
            head += 1
            d = dist_v[v]
            if 2 * d + 2 > g:
                break
            for a in range(deg[v]):
                f = inc[v, a]
                if stamp_e[f] == st:
                    continue
                stamp_e[f] = st
                for b in range(s):
                    w = edges[f, b]
                    if w == v:
                        continue
                    if stamp_v[w] == st:
                        if src_v[w] != src_v[v] and d + dist_v[w] + 2 <= g:
                            bad = True
                            break
                    else:
                        stamp_v[w] = st
                        src_v[w] = src_v[v]
                        dist_v[w] = d + 1
                        qv[tail] = w
                        tail += 1
                if bad:
                    break
        if bad:
            continue
        keep[i] = True
        for j in range(s):
            v = edges[i, j]
            inc[v, deg[v]] = i
            deg[v] += 1
    return keep
