"""Brute-force reference solvers for tiny inputs; never used by the search itself."""

from __future__ import annotations

import itertools
import math
from typing import Sequence

from .instance import Instance
from .solution import ChargedSolution


def brute_split(perm: Sequence[int], inst: Instance) -> tuple[float, list[list[int]]]:
    """Enumerate every depot-insertion pattern of ``perm`` (n <= 12).

    Returns the minimal capacity-feasible depot-inclusive distance and one
    minimizing partition (infinity and no routes when none is feasible).
    """
    perm = list(perm)
    n = len(perm)
    if n == 0:
        return 0.0, []
    if n > 12:
        raise ValueError("brute_split is limited to 12 customers")
    dist = inst.dist_rows
    depot = inst.depot
    demand = inst.demand

    best = math.inf
    best_routes: list[list[int]] = []
    for mask in range(1 << (n - 1)):
        routes = []
        start = 0
        for gap in range(n - 1):
            if mask >> gap & 1:
                routes.append(perm[start : gap + 1])
                start = gap + 1
        routes.append(perm[start:])
        if any(sum(int(demand[c]) for c in r) > inst.capacity for r in routes):
            continue
        cost = 0.0
        for r in routes:
            cost += dist[depot][r[0]] + dist[r[-1]][depot]
            cost += sum(dist[u][v] for u, v in zip(r, r[1:]))
        if cost < best:
            best = cost
            best_routes = routes
    return best, best_routes


def brute_charge(
    route: Sequence[int], inst: Instance, max_insertions: int = 3
) -> float:
    """Exact continuous-battery charging cost for one route by enumeration.

    Considers every ordered station sequence of length up to ``max_insertions``
    on each leg, simulating the real-valued battery with a full recharge at
    every station.  States dominated in both cost and remaining charge are
    pruned.  Returns infinity when no sequence within the cap is feasible.
    """
    route = list(route)
    stations = inst.stations
    if len(stations) > 4:
        raise ValueError("brute_charge is limited to 4 stations")
    dist = inst.dist_rows
    h = inst.consumption_rate
    cap = inst.battery_capacity

    options: list[tuple[int, ...]] = [()]
    for length in range(1, max_insertions + 1):
        options.extend(itertools.product(stations, repeat=length))

    # labels: battery level on arrival at the current node -> minimal cost
    labels: dict[float, float] = {cap: 0.0}
    for u, v in zip(route, route[1:]):
        nxt: dict[float, float] = {}
        for level, cost in labels.items():
            for seq in options:
                lvl = level
                total = cost
                feasible = True
                prev = u
                for s in seq:
                    lvl -= h * dist[prev][s]
                    if lvl < 0:
                        feasible = False
                        break
                    total += dist[prev][s]
                    lvl = cap
                    prev = s
                if not feasible:
                    continue
                lvl -= h * dist[prev][v]
                if lvl < 0:
                    continue
                total += dist[prev][v]
                if lvl not in nxt or total < nxt[lvl]:
                    nxt[lvl] = total
        # drop states beaten on both coordinates
        labels = {}
        for lvl in sorted(nxt, reverse=True):
            cost = nxt[lvl]
            if all(cost < other for other in labels.values()):
                labels[lvl] = cost
        if not labels:
            return math.inf
    return min(labels.values())


def brute_evrp(inst: Instance, max_insertions: int = 3) -> tuple[float, ChargedSolution | None]:
    """Globally optimal charged solution by full enumeration (tiny instances).

    Exhausts all customer permutations, all depot-insertion patterns and all
    charging sequences; route charging costs are memoized across plans.
    """
    customers = inst.customers
    if len(customers) > 7:
        raise ValueError("brute_evrp is limited to 7 customers")
    if len(inst.stations) > 4:
        raise ValueError("brute_evrp is limited to 4 stations")
    depot = inst.depot
    demand = inst.demand
    cap = inst.capacity

    charge_cache: dict[tuple[int, ...], float] = {}

    def route_cost(r: tuple[int, ...]) -> float:
        if r not in charge_cache:
            charge_cache[r] = brute_charge([depot, *r, depot], inst, max_insertions)
        return charge_cache[r]

    best = math.inf
    best_routes: list[list[int]] | None = None
    n = len(customers)
    for perm in itertools.permutations(customers):
        for mask in range(1 << (n - 1)):
            routes = []
            start = 0
            for gap in range(n - 1):
                if mask >> gap & 1:
                    routes.append(perm[start : gap + 1])
                    start = gap + 1
            routes.append(perm[start:])
            cost = 0.0
            ok = True
            for r in routes:
                if sum(int(demand[c]) for c in r) > cap:
                    ok = False
                    break
                cost += route_cost(r)
                if cost >= best:
                    ok = False
                    break
            if ok and cost < best:
                best = cost
                best_routes = [list(r) for r in routes]

    if best_routes is None:
        return math.inf, None
    # rebuild the winning visit sequences, stations included
    solution_routes = []
    for r in best_routes:
        solution_routes.append(_best_charged_route([depot, *r, depot], inst, max_insertions))
    return best, ChargedSolution.from_routes(inst, solution_routes)


def _best_charged_route(
    route: list[int], inst: Instance, max_insertions: int
) -> list[int]:
    """Recover one optimal station-augmented visit sequence for a route."""
    stations = inst.stations
    dist = inst.dist_rows
    h = inst.consumption_rate
    cap = inst.battery_capacity

    options: list[tuple[int, ...]] = [()]
    for length in range(1, max_insertions + 1):
        options.extend(itertools.product(stations, repeat=length))

    best = math.inf
    best_seq: list[int] | None = None

    def rec(pos: int, level: float, cost: float, visits: list[int]) -> None:
        nonlocal best, best_seq
        if cost >= best:
            return
        if pos == len(route) - 1:
            best = cost
            best_seq = list(visits)
            return
        u, v = route[pos], route[pos + 1]
        for seq in options:
            lvl = level
            total = cost
            prev = u
            feasible = True
            for s in seq:
                lvl -= h * dist[prev][s]
                if lvl < 0:
                    feasible = False
                    break
                total += dist[prev][s]
                lvl = cap
                prev = s
            if not feasible:
                continue
            lvl -= h * dist[prev][v]
            if lvl < 0:
                continue
            total += dist[prev][v]
            rec(pos + 1, lvl, total, visits + list(seq) + [v])

    rec(0, cap, 0.0, [route[0]])
    if best_seq is None:
        raise ValueError("route is infeasible")
    return best_seq
