"""EVRP problem instances: node geometry, demands, capacities, distances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable, Sequence

import numpy as np


class NodeKind(Enum):
    DEPOT = "depot"
    CUSTOMER = "customer"
    STATION = "station"


@dataclass(frozen=True)
class Node:
    """A single node with its dense solver index and original file id."""

    index: int
    file_id: int
    kind: NodeKind
    x: float
    y: float


class InstanceError(ValueError):
    """Malformed instance data; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Instance:
    """Immutable EVRP instance.

    Nodes are indexed densely 0..N-1 with exactly one depot.  Distances are
    exact double-precision Euclidean values; travelling an edge consumes
    ``consumption_rate`` times its length in battery energy.  Instances are
    safe to share across concurrent solver runs.
    """

    def __init__(
        self,
        name: str,
        nodes: Sequence[Node],
        demands: Sequence[int],
        capacity: int,
        battery_capacity: float,
        consumption_rate: float,
        declared_vehicles: int | None = None,
        declared_optimum: float | None = None,
        comment: str | None = None,
    ):
        self.name = name
        self.nodes = tuple(nodes)
        self.demand = np.asarray(demands, dtype=np.int64)
        self.capacity = int(capacity)
        self.battery_capacity = float(battery_capacity)
        self.consumption_rate = float(consumption_rate)
        self.declared_vehicles = declared_vehicles
        self.declared_optimum = declared_optimum
        self.comment = comment
        self._check()

        self.depot = next(n.index for n in self.nodes if n.kind is NodeKind.DEPOT)
        self.customers = [n.index for n in self.nodes if n.kind is NodeKind.CUSTOMER]
        self.stations = [n.index for n in self.nodes if n.kind is NodeKind.STATION]
        self.coords = np.array([(n.x, n.y) for n in self.nodes], dtype=np.float64)

        dx = self.coords[:, 0:1] - self.coords[:, 0:1].T
        dy = self.coords[:, 1:2] - self.coords[:, 1:2].T
        self.dist = np.hypot(dx, dy)
        # plain nested lists: scalar lookups are markedly faster than ndarray indexing
        self.dist_rows: list[list[float]] = self.dist.tolist()
        self._neighbors: list[list[int]] | None = None

    def _check(self) -> None:
        n = len(self.nodes)
        if n == 0:
            raise InstanceError("instance has no nodes")
        if len(self.demand) != n:
            raise InstanceError("demand vector length does not match node count")
        kinds = [node.kind for node in self.nodes]
        if kinds.count(NodeKind.DEPOT) != 1:
            raise InstanceError("instance must contain exactly one depot")
        if [node.index for node in self.nodes] != list(range(n)):
            raise InstanceError("node indices must be dense 0..N-1 in order")
        if self.capacity <= 0:
            raise InstanceError("cargo capacity must be positive")
        if not (self.battery_capacity > 0):
            raise InstanceError("battery capacity must be positive")
        if not (self.consumption_rate > 0):
            raise InstanceError("consumption rate must be positive")
        for node in self.nodes:
            if not (math.isfinite(node.x) and math.isfinite(node.y)):
                raise InstanceError(f"non-finite coordinate for node {node.file_id}")
            d = int(self.demand[node.index])
            if node.kind is NodeKind.CUSTOMER:
                if d < 0:
                    raise InstanceError(f"negative demand for node {node.file_id}")
                if d > self.capacity:
                    raise InstanceError(
                        f"demand {d} of node {node.file_id} exceeds capacity {self.capacity}"
                    )
            elif d != 0:
                raise InstanceError(
                    f"{node.kind.value} node {node.file_id} must have zero demand"
                )

    @property
    def n(self) -> int:
        return len(self.nodes)

    def distance(self, i: int, j: int) -> float:
        """Euclidean distance between nodes ``i`` and ``j``."""
        return self.dist_rows[i][j]

    def energy(self, i: int, j: int) -> float:
        """Battery energy consumed travelling from ``i`` to ``j``."""
        return self.consumption_rate * self.dist_rows[i][j]

    def customer_neighbors(self, i: int) -> list[int]:
        """Customers sorted by distance from node ``i`` (ties by index), excluding ``i``."""
        if self._neighbors is None:
            cust = np.array(self.customers, dtype=np.int64)
            ranked: list[list[int]] = []
            for idx in range(self.n):
                d = self.dist[idx, cust]
                order = np.lexsort((cust, d))
                ranked.append([int(c) for c in cust[order] if c != idx])
            self._neighbors = ranked
        return self._neighbors[i]

    def file_id_of(self, index: int) -> int:
        return self.nodes[index].file_id

    def index_of_file_id(self, file_id: int) -> int:
        try:
            return self._file_id_map[file_id]
        except AttributeError:
            self._file_id_map = {n.file_id: n.index for n in self.nodes}
            return self._file_id_map[file_id]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.name == other.name
            and self.nodes == other.nodes
            and self.capacity == other.capacity
            and self.battery_capacity == other.battery_capacity
            and self.consumption_rate == other.consumption_rate
            and self.declared_vehicles == other.declared_vehicles
            and self.declared_optimum == other.declared_optimum
            and np.array_equal(self.demand, other.demand)
        )

    def __repr__(self) -> str:
        return (
            f"Instance({self.name!r}, customers={len(self.customers)}, "
            f"stations={len(self.stations)}, Q={self.capacity}, "
            f"B={self.battery_capacity}, h={self.consumption_rate})"
        )


def build_instance(
    name: str,
    depot: tuple[float, float],
    customers: Iterable[tuple[float, float, int]],
    stations: Iterable[tuple[float, float]] = (),
    capacity: int = 10**9,
    battery_capacity: float = float("1e18"),
    consumption_rate: float = 1.0,
) -> Instance:
    """Assemble an instance programmatically (depot first, then customers, then stations)."""
    nodes = [Node(0, 1, NodeKind.DEPOT, float(depot[0]), float(depot[1]))]
    demands = [0]
    for x, y, d in customers:
        nodes.append(Node(len(nodes), len(nodes) + 1, NodeKind.CUSTOMER, float(x), float(y)))
        demands.append(int(d))
    for x, y in stations:
        nodes.append(Node(len(nodes), len(nodes) + 1, NodeKind.STATION, float(x), float(y)))
        demands.append(0)
    return Instance(name, nodes, demands, capacity, battery_capacity, consumption_rate)


_SECTION_NAMES = {
    "NODE_COORD_SECTION",
    "DEMAND_SECTION",
    "STATIONS_COORD_SECTION",
    "DEPOT_SECTION",
    "EOF",
}

_HEADER_KEYS = {
    "NAME",
    "TYPE",
    "COMMENT",
    "DIMENSION",
    "STATIONS",
    "CAPACITY",
    "ENERGY_CAPACITY",
    "ENERGY_CONSUMPTION",
    "VEHICLES",
    "OPTIMAL_VALUE",
    "EDGE_WEIGHT_TYPE",
    "EDGE_WEIGHT_FORMAT",
}

_MANDATORY_KEYS = ("DIMENSION", "STATIONS", "CAPACITY", "ENERGY_CAPACITY", "ENERGY_CONSUMPTION")


def _parse_int(text: str, line: int, what: str) -> int:
    try:
        value = int(text)
    except ValueError:
        try:
            value = float(text)
        except ValueError:
            raise InstanceError(f"malformed numeric literal {text!r} for {what}", line) from None
        if not value.is_integer():
            raise InstanceError(f"{what} must be an integer, got {text!r}", line)
        value = int(value)
    return value


def _parse_float(text: str, line: int, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise InstanceError(f"malformed numeric literal {text!r} for {what}", line) from None


def parse_instance(source: str | IO[str], name_hint: str | None = None) -> Instance:
    """Parse a TSPLIB-style EVRP file into a validated :class:`Instance`.

    Header lines ``KEY: value`` (keys case-insensitive, whitespace around the
    colon optional) are followed by NODE_COORD_SECTION, DEMAND_SECTION,
    STATIONS_COORD_SECTION, DEPOT_SECTION and a mandatory EOF terminator.
    File node ids are 1-based and remapped onto dense 0-based indices.
    """
    text = source if isinstance(source, str) else source.read()
    header: dict[str, str] = {}
    coord_lines: list[tuple[int, int, float, float]] = []  # (line, id, x, y)
    demand_lines: list[tuple[int, int, int]] = []  # (line, id, demand)
    station_ids: list[tuple[int, int]] = []  # (line, id)
    depot_ids: list[tuple[int, int]] = []
    saw_eof = False
    section: str | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper in _SECTION_NAMES:
            if upper == "EOF":
                saw_eof = True
                break
            section = upper
            continue
        if section is None:
            if ":" not in line:
                raise InstanceError(f"expected 'KEY: value' header, got {line!r}", lineno)
            key, value = line.split(":", 1)
            key = key.strip().upper()
            value = value.strip()
            if key not in _HEADER_KEYS:
                raise InstanceError(f"unknown header key {key!r}", lineno)
            if key in header:
                raise InstanceError(f"duplicate header key {key!r}", lineno)
            header[key] = value
        elif section == "NODE_COORD_SECTION":
            parts = line.split()
            if len(parts) != 3:
                raise InstanceError(f"expected 'id x y', got {line!r}", lineno)
            nid = _parse_int(parts[0], lineno, "node id")
            x = _parse_float(parts[1], lineno, "x coordinate")
            y = _parse_float(parts[2], lineno, "y coordinate")
            coord_lines.append((lineno, nid, x, y))
        elif section == "DEMAND_SECTION":
            parts = line.split()
            if len(parts) != 2:
                raise InstanceError(f"expected 'id demand', got {line!r}", lineno)
            nid = _parse_int(parts[0], lineno, "node id")
            dem = _parse_int(parts[1], lineno, "demand")
            demand_lines.append((lineno, nid, dem))
        elif section == "STATIONS_COORD_SECTION":
            station_ids.append((lineno, _parse_int(line, lineno, "station id")))
        elif section == "DEPOT_SECTION":
            value = _parse_int(line, lineno, "depot id")
            if value != -1:
                depot_ids.append((lineno, value))

    if not saw_eof:
        raise InstanceError("missing EOF terminator", len(text.splitlines()))
    for key in _MANDATORY_KEYS:
        if key not in header:
            raise InstanceError(f"missing mandatory header key {key!r}")

    dimension = _parse_int(header["DIMENSION"], 0, "DIMENSION")
    n_stations = _parse_int(header["STATIONS"], 0, "STATIONS")
    capacity = _parse_int(header["CAPACITY"], 0, "CAPACITY")
    battery = _parse_float(header["ENERGY_CAPACITY"], 0, "ENERGY_CAPACITY")
    rate = _parse_float(header["ENERGY_CONSUMPTION"], 0, "ENERGY_CONSUMPTION")
    ewt = header.get("EDGE_WEIGHT_TYPE", header.get("EDGE_WEIGHT_FORMAT", "EUC_2D")).upper()
    if ewt != "EUC_2D":
        raise InstanceError(f"unsupported EDGE_WEIGHT_TYPE {ewt!r} (only EUC_2D)")
    vehicles = (
        _parse_int(header["VEHICLES"], 0, "VEHICLES") if "VEHICLES" in header else None
    )
    optimum = (
        _parse_float(header["OPTIMAL_VALUE"], 0, "OPTIMAL_VALUE")
        if "OPTIMAL_VALUE" in header
        else None
    )
    name = header.get("NAME") or name_hint or "unnamed"

    seen_ids: dict[int, int] = {}
    for lineno, nid, _, _ in coord_lines:
        if nid in seen_ids:
            raise InstanceError(f"duplicate node id {nid}", lineno)
        seen_ids[nid] = lineno
    if len(coord_lines) != dimension + n_stations:
        raise InstanceError(
            f"NODE_COORD_SECTION has {len(coord_lines)} entries, "
            f"expected DIMENSION + STATIONS = {dimension + n_stations}"
        )

    station_set = set()
    for lineno, sid in station_ids:
        if sid not in seen_ids:
            raise InstanceError(f"station id {sid} not in NODE_COORD_SECTION", lineno)
        if sid in station_set:
            raise InstanceError(f"duplicate station id {sid}", lineno)
        station_set.add(sid)
    if len(station_set) != n_stations:
        raise InstanceError(
            f"STATIONS_COORD_SECTION lists {len(station_set)} ids, expected {n_stations}"
        )

    if len(depot_ids) != 1:
        raise InstanceError("DEPOT_SECTION must list exactly one depot id")
    depot_line, depot_id = depot_ids[0]
    if depot_id not in seen_ids:
        raise InstanceError(f"depot id {depot_id} not in NODE_COORD_SECTION", depot_line)
    if depot_id in station_set:
        raise InstanceError(f"depot id {depot_id} is also listed as a station", depot_line)

    order = sorted(seen_ids)
    index_of = {fid: i for i, fid in enumerate(order)}
    coords = {nid: (x, y) for _, nid, x, y in coord_lines}

    demands = [0] * len(order)
    for lineno, nid, dem in demand_lines:
        if nid not in seen_ids:
            raise InstanceError(f"demand for unknown node {nid}", lineno)
        if nid in station_set:
            if dem != 0:
                raise InstanceError(f"nonzero demand for station node {nid}", lineno)
            continue
        if dem < 0:
            raise InstanceError(f"negative demand for node {nid}", lineno)
        if dem > capacity:
            raise InstanceError(f"demand {dem} of node {nid} exceeds capacity {capacity}", lineno)
        demands[index_of[nid]] = dem
    if demands[index_of[depot_id]] != 0:
        raise InstanceError(f"depot node {depot_id} must have zero demand")

    nodes = []
    for fid in order:
        if fid == depot_id:
            kind = NodeKind.DEPOT
        elif fid in station_set:
            kind = NodeKind.STATION
        else:
            kind = NodeKind.CUSTOMER
        x, y = coords[fid]
        nodes.append(Node(index_of[fid], fid, kind, x, y))

    return Instance(
        name,
        nodes,
        demands,
        capacity,
        battery,
        rate,
        declared_vehicles=vehicles,
        declared_optimum=optimum,
        comment=header.get("COMMENT"),
    )


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh, name_hint=path)


def _fmt(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def dump_instance(inst: Instance) -> str:
    """Serialize an instance back to the file format accepted by :func:`parse_instance`."""
    lines = [f"NAME: {inst.name}", "TYPE: EVRP"]
    if inst.comment:
        lines.append(f"COMMENT: {inst.comment}")
    if inst.declared_optimum is not None:
        lines.append(f"OPTIMAL_VALUE: {_fmt(inst.declared_optimum)}")
    if inst.declared_vehicles is not None:
        lines.append(f"VEHICLES: {inst.declared_vehicles}")
    lines.append(f"DIMENSION: {len(inst.customers) + 1}")
    lines.append(f"STATIONS: {len(inst.stations)}")
    lines.append(f"CAPACITY: {inst.capacity}")
    lines.append(f"ENERGY_CAPACITY: {_fmt(inst.battery_capacity)}")
    lines.append(f"ENERGY_CONSUMPTION: {_fmt(inst.consumption_rate)}")
    lines.append("EDGE_WEIGHT_TYPE: EUC_2D")
    lines.append("NODE_COORD_SECTION")
    for node in inst.nodes:
        lines.append(f"{node.file_id} {_fmt(node.x)} {_fmt(node.y)}")
    lines.append("DEMAND_SECTION")
    for node in inst.nodes:
        if node.kind is not NodeKind.STATION:
            lines.append(f"{node.file_id} {int(inst.demand[node.index])}")
    lines.append("STATIONS_COORD_SECTION")
    for idx in inst.stations:
        lines.append(f"{inst.nodes[idx].file_id}")
    lines.append("DEPOT_SECTION")
    lines.append(f"{inst.nodes[inst.depot].file_id}")
    lines.append("-1")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def save_instance(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_instance(inst))
