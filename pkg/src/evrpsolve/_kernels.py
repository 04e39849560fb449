"""Compiled inner loops for the two dynamic programs."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def split_kernel(dem, q, legs, to_depot, from_depot):
    """Cargo-residual DP over one permutation.

    ``legs[j]`` is the direct distance into the j-th customer, ``to_depot[j]``
    the distance from its predecessor back to the depot and ``from_depot[j]``
    the distance from the depot to the j-th customer.  Returns the final
    residual level, the cost before the closing depot leg, and per-position
    restock flags with the residual they restocked from.
    """
    n = dem.shape[0]
    inf = np.inf
    dp = np.full(q + 1, inf)
    dp[q] = 0.0
    used = np.zeros(n + 1, dtype=np.bool_)
    parent = np.zeros(n + 1, dtype=np.int64)

    for j in range(1, n + 1):
        dj = dem[j - 1]
        leg = legs[j - 1]
        new = np.full(q + 1, inf)
        for i in range(q - dj + 1):
            new[i] = dp[i + dj] + leg
        best = 0
        for i in range(1, q + 1):
            if dp[i] < dp[best]:
                best = i
        restock = dp[best] + to_depot[j - 1] + from_depot[j - 1]
        if restock < new[q - dj]:
            new[q - dj] = restock
            used[j] = True
            parent[j] = best
        dp = new

    final = 0
    for i in range(1, q + 1):
        if dp[i] < dp[final]:
            final = i
    return final, dp[final], used, parent


@njit(cache=True)
def improve_segment_kernel(seg, dist, two_opt):
    """First-improvement local search on one route segment, until fixpoint.

    Applies the 2-opt reversal (``two_opt``) or position swap whenever the
    open-path length over customer-to-customer edges strictly decreases,
    restarting the scan after each accepted move.
    """
    length = seg.shape[0]
    if length < 2:
        return
    eps = -1e-10
    improved = True
    while improved:
        improved = False
        for i in range(length - 1):
            for j in range(i + 1, length):
                delta = 0.0
                if two_opt:
                    if i > 0:
                        left = seg[i - 1]
                        delta += dist[left, seg[j]] - dist[left, seg[i]]
                    if j < length - 1:
                        right = seg[j + 1]
                        delta += dist[seg[i], right] - dist[seg[j], right]
                else:
                    if i > 0:
                        left = seg[i - 1]
                        delta += dist[left, seg[j]] - dist[left, seg[i]]
                    if j < length - 1:
                        right = seg[j + 1]
                        delta += dist[seg[i], right] - dist[seg[j], right]
                    if j - i > 1:
                        delta += dist[seg[j], seg[i + 1]] - dist[seg[i], seg[i + 1]]
                        delta += dist[seg[j - 1], seg[i]] - dist[seg[j - 1], seg[j]]
                if delta < eps:
                    if two_opt:
                        lo, hi = i, j
                        while lo < hi:
                            seg[lo], seg[hi] = seg[hi], seg[lo]
                            lo += 1
                            hi -= 1
                    else:
                        seg[i], seg[j] = seg[j], seg[i]
                    improved = True
                    break
            if improved:
                break


@njit(cache=True)
def charge_kernel(route, k, bins, dist, stations, station_cost):
    """Battery-bin DP over one depot-delimited route.

    Fills ``dp[j, i]`` (minimal distance serving the first ``j`` route nodes
    with ``i`` battery bins left) and ``moves`` (-2 unreachable, -1 direct
    leg, otherwise the exit-station index of a charging detour).  Relaxation
    order fixes the tie-breaks: direct first, then exit stations ascending.
    """
    steps = route.shape[0]
    m = stations.shape[0]
    full = k - 1
    inf = np.inf
    dp = np.full((steps, k), inf)
    moves = np.full((steps, k), -2, dtype=np.int32)
    dp[0, full] = 0.0
    suffix = np.empty(k)
    entry = np.empty(m)

    for j in range(1, steps):
        u = route[j - 1]
        v = route[j]
        prev = dp[j - 1]
        cur = dp[j]
        pmove = moves[j]

        need = bins[u, v]
        if need <= full:
            leg = dist[u, v]
            for i in range(k - need):
                value = prev[i + need]
                if value < inf:
                    cur[i] = value + leg
                    pmove[i] = -1

        if m > 0:
            running = inf
            for i in range(k - 1, -1, -1):
                if prev[i] < running:
                    running = prev[i]
                suffix[i] = running
            for s in range(m):
                t = bins[u, stations[s]]
                if t <= full and suffix[t] < inf:
                    entry[s] = suffix[t] + dist[u, stations[s]]
                else:
                    entry[s] = inf
            for x in range(m):
                ob = bins[stations[x], v]
                if ob > full:
                    continue
                best = inf
                for s in range(m):
                    value = entry[s] + station_cost[s, x]
                    if value < best:
                        best = value
                if best < inf:
                    value = best + dist[stations[x], v]
                    level = full - ob
                    if value < cur[level]:
                        cur[level] = value
                        pmove[level] = x

    end = 0
    last = dp[steps - 1]
    for i in range(1, k):
        if last[i] < last[end]:
            end = i
    return dp, moves, end
