"""Compiled inner loops."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def greedy_pack(edges, order, covered, used):
    """Scan instances in ``order`` and keep each one whose uncovered edges are
    still free.  ``used`` is scratch space, all False on entry and on exit.

    Returns (picked row indices, newly covered edges per pick), in pick order.
    """
    n_rows, width = edges.shape
    picked = np.empty(order.shape[0], np.int64)
    gains = np.empty(order.shape[0], np.int64)
    count = 0
    for idx in order:
        ok = True
        gain = 0
        for j in range(width):
            e = edges[idx, j]
            if not covered[e]:
                if used[e]:
                    ok = False
                    break
                gain += 1
        if ok and gain > 0:
            for j in range(width):
                e = edges[idx, j]
                if not covered[e]:
                    used[e] = True
            picked[count] = idx
            gains[count] = gain
            count += 1
    for c in range(count):
        for j in range(width):
            used[edges[picked[c], j]] = False
    return picked[:count], gains[:count]


@njit(cache=True, nogil=True)
def any_uncovered(edges, covered):
    n_rows, width = edges.shape
    out = np.zeros(n_rows, np.bool_)
    for i in range(n_rows):
        for j in range(width):
            if not covered[edges[i, j]]:
                out[i] = True
                break
    return out
