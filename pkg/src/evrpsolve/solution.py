"""Solution representations: genotypes, route plans, charged solutions, validation."""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .instance import Instance, NodeKind


def genotype_hash(perm: Sequence[int]) -> int:
    """Deterministic 64-bit digest of a customer sequence (order-sensitive)."""
    payload = struct.pack(f"<{len(perm)}I", *perm)
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "big")


@dataclass
class Genotype:
    """A customer permutation with cached route boundaries and fitness.

    ``boundaries`` holds cumulative end indices of the routes produced by the
    latest split (last entry equals ``len(perm)``); it is ``None`` whenever the
    permutation changed since the last evaluation, and likewise ``fitness``.
    """

    perm: list[int]
    boundaries: list[int] | None = None
    fitness: float | None = None
    _digest: int | None = field(default=None, repr=False, compare=False)

    @property
    def digest(self) -> int:
        if self._digest is None:
            self._digest = genotype_hash(self.perm)
        return self._digest

    def routes(self) -> list[list[int]]:
        if self.boundaries is None:
            raise ValueError("genotype has no cached route boundaries")
        out = []
        start = 0
        for end in self.boundaries:
            out.append(self.perm[start:end])
            start = end
        return out

    def route_index_of(self, customer: int) -> int:
        pos = self.perm.index(customer)
        for r, end in enumerate(self.boundaries):
            if pos < end:
                return r
        raise ValueError(f"customer {customer} not covered by boundaries")

    def clear_caches(self) -> None:
        self.boundaries = None
        self.fitness = None
        self._digest = None

    def clone(self) -> "Genotype":
        return Genotype(
            list(self.perm),
            None if self.boundaries is None else list(self.boundaries),
            self.fitness,
            self._digest,
        )


@dataclass
class RoutePlan:
    """Capacity-feasible partition of a permutation into depot-delimited routes."""

    routes: list[list[int]]
    split_cost: float

    def boundaries(self) -> list[int]:
        ends = []
        total = 0
        for route in self.routes:
            total += len(route)
            ends.append(total)
        return ends


@dataclass
class ChargedSolution:
    """Routes with charging stops inserted, plus battery and cargo traces.

    Each route is a full visit sequence ``depot -> ... -> depot``.  Traces hold
    the battery level on arrival at each visit and the cargo remaining after
    serving it.
    """

    routes: list[list[int]]
    total_distance: float
    battery_trace: list[list[float]]
    cargo_trace: list[list[int]]

    @classmethod
    def from_routes(cls, inst: Instance, routes: Iterable[Sequence[int]]) -> "ChargedSolution":
        dist = inst.dist_rows
        h = inst.consumption_rate
        total = 0.0
        batteries = []
        cargos = []
        out_routes = []
        for route in routes:
            route = list(route)
            battery = [inst.battery_capacity]
            cargo = [inst.capacity]
            level = inst.battery_capacity
            load = inst.capacity
            for prev, node in zip(route, route[1:]):
                leg = dist[prev][node]
                total += leg
                level -= h * leg
                battery.append(level)
                kind = inst.nodes[node].kind
                if kind is NodeKind.STATION or kind is NodeKind.DEPOT:
                    level = inst.battery_capacity
                else:
                    load -= int(inst.demand[node])
                cargo.append(load)
            out_routes.append(route)
            batteries.append(battery)
            cargos.append(cargo)
        return cls(out_routes, total, batteries, cargos)


def objective(sol: ChargedSolution, inst: Instance) -> float:
    """Total distance recomputed from the visit sequences."""
    dist = inst.dist_rows
    return sum(
        dist[u][v] for route in sol.routes for u, v in zip(route, route[1:])
    )


class ConstraintTag(Enum):
    CUSTOMER_ONCE = "CustomerOnce"
    FLOW_CONSERVATION = "FlowConservation"
    BATTERY = "Battery"
    CARGO = "Cargo"
    DEPOT_ENDPOINTS = "DepotEndpoints"


@dataclass(frozen=True)
class Violation:
    tag: ConstraintTag
    where: str


@dataclass
class ViolationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __iter__(self):
        return iter(self.violations)

    def __str__(self) -> str:
        if self.ok:
            return "feasible"
        return "\n".join(f"{v.tag.value}: {v.where}" for v in self.violations)


def validate(sol: ChargedSolution, inst: Instance) -> ViolationReport:
    """Check a charged solution against all feasibility constraints.

    Simulates battery forward with a full charge on every depot and station
    departure and tracks cumulative cargo per route.  Violations are returned
    as data, never raised.
    """
    out: list[Violation] = []
    dist = inst.dist_rows
    h = inst.consumption_rate
    tol = 1e-9 * max(1.0, inst.battery_capacity)

    seen: dict[int, int] = {}
    for r, route in enumerate(sol.routes):
        if len(route) < 2:
            out.append(Violation(ConstraintTag.FLOW_CONSERVATION, f"route {r} has {len(route)} visits"))
            continue
        if route[0] != inst.depot:
            out.append(Violation(ConstraintTag.DEPOT_ENDPOINTS, f"route {r} starts at node {route[0]}"))
        if route[-1] != inst.depot:
            out.append(Violation(ConstraintTag.DEPOT_ENDPOINTS, f"route {r} ends at node {route[-1]}"))
        if inst.depot in route[1:-1]:
            out.append(Violation(ConstraintTag.FLOW_CONSERVATION, f"route {r} visits the depot mid-route"))

        level = inst.battery_capacity
        load = 0
        for pos, (u, v) in enumerate(zip(route, route[1:])):
            level -= h * dist[u][v]
            if level < -tol:
                out.append(
                    Violation(
                        ConstraintTag.BATTERY,
                        f"route {r} leg {pos} ({u}->{v}): battery {level:.6f}",
                    )
                )
                level = 0.0
            kind = inst.nodes[v].kind
            if kind is NodeKind.STATION or kind is NodeKind.DEPOT:
                level = inst.battery_capacity
            elif kind is NodeKind.CUSTOMER:
                load += int(inst.demand[v])
                seen[v] = seen.get(v, 0) + 1
        if load > inst.capacity:
            out.append(
                Violation(ConstraintTag.CARGO, f"route {r} demand {load} exceeds capacity {inst.capacity}")
            )

    for c in inst.customers:
        count = seen.get(c, 0)
        if count != 1:
            out.append(
                Violation(
                    ConstraintTag.CUSTOMER_ONCE,
                    f"customer {c} visited {count} times",
                )
            )
    return ViolationReport(out)


def solution_to_text(sol: ChargedSolution, inst: Instance) -> str:
    """One route per line as original file node ids, then a COST line."""
    lines = [" ".join(str(inst.file_id_of(v)) for v in route) for route in sol.routes]
    lines.append(f"COST {repr(sol.total_distance)}")
    return "\n".join(lines) + "\n"


def solution_from_text(text: str, inst: Instance) -> tuple[list[list[int]], float | None]:
    """Parse the text solution format back into dense-id routes and declared cost."""
    routes: list[list[int]] = []
    cost: float | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.upper().startswith("COST"):
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: malformed COST line {line!r}")
            try:
                cost = float(parts[1])
            except ValueError:
                raise ValueError(f"line {lineno}: malformed cost value {parts[1]!r}") from None
            continue
        route = []
        for token in line.split():
            try:
                fid = int(token)
            except ValueError:
                raise ValueError(f"line {lineno}: malformed node id {token!r}") from None
            try:
                route.append(inst.index_of_file_id(fid))
            except KeyError:
                raise ValueError(f"line {lineno}: unknown node id {fid}") from None
        routes.append(route)
    return routes, cost


def solution_to_json(sol: ChargedSolution, inst: Instance) -> str:
    payload = {
        "instance": inst.name,
        "objective": sol.total_distance,
        "routes": [[inst.file_id_of(v) for v in route] for route in sol.routes],
        "battery_trace": sol.battery_trace,
        "cargo_trace": sol.cargo_trace,
    }
    return json.dumps(payload, indent=2)


def solution_from_json(text: str, inst: Instance) -> tuple[list[list[int]], float | None]:
    payload = json.loads(text)
    routes = [[inst.index_of_file_id(fid) for fid in route] for route in payload["routes"]]
    return routes, payload.get("objective")
