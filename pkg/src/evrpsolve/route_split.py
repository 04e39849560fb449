"""Exact dynamic program splitting a customer permutation into capacity-feasible routes."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ._kernels import split_kernel
from .instance import Instance
from .solution import RoutePlan


class InfeasibleDemandError(ValueError):
    """A single customer demand exceeds the vehicle capacity, so no split exists."""


def _scaled_units(inst: Instance) -> tuple[np.ndarray, int]:
    """Demands and capacity in gcd-reduced cargo units (cached per instance).

    The DP over residual cargo touches only multiples of the gcd, so scaling
    shrinks the column without changing any reachable state.
    """
    cached = getattr(inst, "_split_units", None)
    if cached is None:
        g = max(int(np.gcd.reduce(np.append(inst.demand, inst.capacity))), 1)
        cached = ((inst.demand // g).astype(np.int64), inst.capacity // g)
        inst._split_units = cached
    return cached


def split(perm: Sequence[int], inst: Instance) -> RoutePlan:
    """Optimally insert depot visits into ``perm``, minimizing total distance.

    The DP column ``dp[i]`` holds the minimal distance serving the first ``j``
    customers with ``i`` cargo units left after the ``j``-th.  Each customer is
    either reached directly from its predecessor or after a depot restock; the
    cheaper option wins, with ties resolved toward staying on the road (fewer
    routes).  The result is optimal over all depot-insertion patterns for the
    fixed permutation.
    """
    perm = list(perm)
    n = len(perm)
    if n == 0:
        return RoutePlan([], 0.0)
    scaled, q = _scaled_units(inst)
    perm_arr = np.asarray(perm, dtype=np.int64)
    dem = scaled[perm_arr]
    if int(dem.max()) > q:
        worst = perm[int(np.argmax(dem))]
        raise InfeasibleDemandError(
            f"demand of customer {worst} exceeds capacity {inst.capacity}"
        )

    depot = inst.depot
    prev_arr = np.empty(n, dtype=np.int64)
    prev_arr[0] = depot
    prev_arr[1:] = perm_arr[:-1]
    legs = inst.dist[prev_arr, perm_arr]
    to_depot = inst.dist[prev_arr, depot]
    from_depot = inst.dist[depot, perm_arr]

    final, open_cost, restock_used, restock_parent = split_kernel(
        dem, q, legs, to_depot, from_depot
    )
    cost = float(open_cost + inst.dist[perm[-1], depot])

    starts = []
    i = int(final)
    for j in range(n, 0, -1):
        if restock_used[j] and i == q - int(dem[j - 1]):
            starts.append(j - 1)
            i = int(restock_parent[j])
        else:
            i += int(dem[j - 1])
    starts.reverse()

    bounds = starts + [n]
    routes = []
    prev = 0
    for end in bounds:
        routes.append(perm[prev:end])
        prev = end
    return RoutePlan(routes, cost)


def split_cost_lower_bound(perm: Sequence[int], inst: Instance) -> float:
    """Cheap admissible lower bound on the optimal split cost of ``perm``.

    Every split keeps the open-path edges of the permutation or replaces them
    with via-depot detours that are no shorter (triangle inequality), and the
    first departure and last return each cost at least the smallest
    customer-depot distance.
    """
    perm = list(perm)
    if not perm:
        return 0.0
    dist = inst.dist_rows
    depot = inst.depot
    path = sum(dist[u][v] for u, v in zip(perm, perm[1:]))
    closest = min(dist[depot][c] for c in perm)
    return path + 2.0 * closest
