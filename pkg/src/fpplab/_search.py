"""Compiled Dijkstra over a rectangular window of the grid layout.

Vertices are flat indices ``i * S + j``; flat order is lexicographic (x, y),
so "smallest predecessor" ties resolve lexicographically.
"""

import heapq

import numpy as np
from numba import njit


@njit(cache=True)
def dijkstra_grid(h, v, source, targets, i0, i1, j0, j1):
    """Single-source search restricted to rows i0..i1 and columns j0..j1.

    Stops once every flat index in ``targets`` is settled; an empty
    ``targets`` array runs the search to exhaustion. Returns ``(dist, pred)``.
    """
    s = v.shape[0]
    n = s * s
    dist = np.full(n, np.inf)
    pred = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    is_target = np.zeros(n, dtype=np.bool_)
    remaining = 0
    for t in targets:
        if not is_target[t]:
            is_target[t] = True
            remaining += 1
    dist[source] = 0.0
    heap = [(0.0, source)]
    while len(heap) > 0:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if is_target[u]:
            remaining -= 1
            if remaining == 0:
                break
        i = u // s
        j = u - i * s
        for k in range(4):
            if k == 0:
                if i <= i0:
                    continue
                x = u - s
                w = h[i - 1, j]
            elif k == 1:
                if i >= i1:
                    continue
                x = u + s
                w = h[i, j]
            elif k == 2:
                if j <= j0:
                    continue
                x = u - 1
                w = v[i, j - 1]
            else:
                if j >= j1:
                    continue
                x = u + 1
                w = v[i, j]
            if done[x]:
                continue
            nd = d + w
            if nd < dist[x]:
                dist[x] = nd
                pred[x] = u
                heapq.heappush(heap, (nd, x))
            elif nd == dist[x] and u < pred[x]:
                pred[x] = u
    return dist, pred


@njit(cache=True)
def trace_back(pred, source, target):
    length = 1
    u = target
    while u != source:
        u = pred[u]
        if u < 0:
            return np.empty(0, dtype=np.int64)
        length += 1
    out = np.empty(length, dtype=np.int64)
    u = target
    for k in range(length - 1, -1, -1):
        out[k] = u
        if k > 0:
            u = pred[u]
    return out
