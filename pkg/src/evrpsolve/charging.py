"""Charging-station insertion for fixed routes via a battery-bin dynamic program."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._kernels import charge_kernel
from .instance import Instance
from .solution import ChargedSolution, RoutePlan


@dataclass(frozen=True)
class BinScale:
    """Discretization of the battery into ``count`` levels 0..count-1.

    Level ``i`` represents ``i * bin_energy`` units of charge; consumption is
    rounded up to whole bins, so binned feasibility implies real feasibility.
    """

    count: int
    bin_energy: float

    @classmethod
    def for_battery(cls, k: int, battery_capacity: float) -> "BinScale":
        if k < 2:
            raise ValueError("bin count must be at least 2")
        return cls(k, battery_capacity / (k - 1))

    def bins_for(self, energy: float) -> int:
        if energy <= 0.0:
            return 0
        return math.ceil(energy / self.bin_energy)


@dataclass
class StationPathTable:
    """All-pairs optimal station-to-station paths on full-battery hops.

    ``cost[a][b]`` is the minimal distance from station ``a`` to station ``b``
    using only hops that are feasible on a full charge (each station recharges
    completely); unreachable pairs hold infinity.  ``parent`` supports path
    reconstruction.  Station order matches ``Instance.stations``.
    """

    station_nodes: list[int]
    cost: np.ndarray
    parent: np.ndarray
    _contexts: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.station_nodes)

    def intermediates(self, a: int, b: int) -> list[int]:
        """Station node ids strictly between ``a`` and ``b`` on the optimal path."""
        if a == b:
            return []
        chain = []
        cur = b
        while cur != a:
            prev = int(self.parent[a, cur])
            if prev < 0:
                raise ValueError(f"stations {a} and {b} are not connected")
            chain.append(cur)
            cur = prev
        chain.reverse()
        return [self.station_nodes[s] for s in chain[:-1]]


def build_station_table(inst: Instance) -> StationPathTable:
    """Exact all-pairs shortest paths over the full-battery station graph."""
    stations = list(inst.stations)
    m = len(stations)
    cost = np.full((m, m), math.inf)
    parent = np.full((m, m), -1, dtype=np.int64)
    if m == 0:
        return StationPathTable(stations, cost, parent)

    dist = inst.dist_rows
    rng_limit = inst.battery_capacity / inst.consumption_rate
    adjacency: list[list[tuple[float, int]]] = []
    for a in range(m):
        row = []
        for b in range(m):
            if a != b and dist[stations[a]][stations[b]] <= rng_limit:
                row.append((dist[stations[a]][stations[b]], b))
        adjacency.append(row)

    for src in range(m):
        best = [math.inf] * m
        best[src] = 0.0
        parent[src, src] = src
        heap = [(0.0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > best[u]:
                continue
            for w, v in adjacency[u]:
                nd = d + w
                if nd < best[v]:
                    best[v] = nd
                    parent[src, v] = u
                    heapq.heappush(heap, (nd, v))
        cost[src, :] = best
    return StationPathTable(stations, cost, parent)


class _Context:
    """Per-(instance, table, bin-count) arrays shared by all insertions."""

    def __init__(self, inst: Instance, table: StationPathTable, k: int):
        self.scale = BinScale.for_battery(k, inst.battery_capacity)
        self.k = k
        self.full = k - 1
        bins = np.ceil(inst.consumption_rate * inst.dist / self.scale.bin_energy)
        self.bins = bins.astype(np.int64)
        self.stations = np.asarray(table.station_nodes, dtype=np.int64)
        self.to_station_dist = inst.dist[:, self.stations]
        self.to_station_bins = self.bins[:, self.stations]


def _context(inst: Instance, table: StationPathTable, k: int) -> _Context:
    ctx = table._contexts.get((id(inst), k))
    if ctx is None:
        ctx = _Context(inst, table, k)
        table._contexts[(id(inst), k)] = ctx
    return ctx


def insert_stations(
    route: Sequence[int],
    k: int,
    inst: Instance,
    table: StationPathTable,
) -> ChargedSolution | None:
    """Insert charging stops into one depot-delimited route, or return ``None``.

    For every position the vehicle either drives the next leg directly or
    detours through an entry station (reachable on its current charge), an
    optimal chain of intermediate stations, and an exit station that fixes the
    charge remaining at the next node.  The DP minimizes total distance over
    ``k`` battery levels; conservative bin rounding keeps every reconstructed
    route feasible under the continuous battery simulation.
    """
    route = list(route)
    if route[0] != inst.depot or route[-1] != inst.depot:
        raise ValueError("route must start and end at the depot")
    visits = _insert_stations_visits(route, k, inst, table)
    if visits is None:
        return None
    return ChargedSolution.from_routes(inst, [visits])


def _insert_stations_visits(
    route: list[int], k: int, inst: Instance, table: StationPathTable
) -> list[int] | None:
    ctx = _context(inst, table, k)
    steps = len(route)
    if steps < 2:
        return list(route)

    m = table.size
    stations = table.station_nodes
    full = ctx.full
    inf = math.inf
    binsmat = ctx.bins
    station_cost = table.cost

    dp, moves, end_level = charge_kernel(
        np.asarray(route, dtype=np.int64), k, binsmat, inst.dist, ctx.stations, station_cost
    )
    if math.isinf(dp[steps - 1, end_level]):
        return None

    visits = [route[-1]]
    level = end_level
    for j in range(steps - 1, 0, -1):
        u = route[j - 1]
        move = int(moves[j, level])
        if move == -1:
            level = level + int(binsmat[u, route[j]])
        else:
            # recover the entry station that won the forward minimization
            prev = dp[j - 1]
            suffix_min = np.minimum.accumulate(prev[::-1])[::-1]
            thresholds = ctx.to_station_bins[u]
            entry = suffix_min[np.minimum(thresholds, full)] + ctx.to_station_dist[u]
            entry[thresholds > full] = inf
            s_in = int(np.argmin(entry + station_cost[:, move]))
            chain = [stations[s_in]]
            chain += table.intermediates(s_in, move)
            if move != s_in:
                chain.append(stations[move])
            visits = chain + visits
            threshold = int(binsmat[u, stations[s_in]])
            level = threshold + int(np.argmin(prev[threshold:]))
        visits.insert(0, u)
    return visits


def repair_solution(
    plan: RoutePlan,
    k: int,
    inst: Instance,
    table: StationPathTable,
) -> ChargedSolution | None:
    """Insert charging stops into every route of a plan; ``None`` if any route fails.

    The battery is full at each depot departure, so routes are independent and
    costs add up.
    """
    routes = []
    for customers in plan.routes:
        visits = _insert_stations_visits([inst.depot, *customers, inst.depot], k, inst, table)
        if visits is None:
            return None
        routes.append(visits)
    return ChargedSolution.from_routes(inst, routes)


def repair_cost(
    plan: RoutePlan,
    k: int,
    inst: Instance,
    table: StationPathTable,
) -> float | None:
    """Total distance of :func:`repair_solution` without reconstructing visits.

    The fitness pipeline only needs the price of a plan; skipping the
    backtracking and trace construction keeps evaluations cheap.
    """
    ctx = _context(inst, table, k)
    total = 0.0
    depot = inst.depot
    for customers in plan.routes:
        route = np.empty(len(customers) + 2, dtype=np.int64)
        route[0] = depot
        route[1:-1] = customers
        route[-1] = depot
        dp, _, end_level = charge_kernel(
            route, k, ctx.bins, inst.dist, ctx.stations, table.cost
        )
        value = dp[len(route) - 1, end_level]
        if math.isinf(value):
            return None
        total += value
    return total
