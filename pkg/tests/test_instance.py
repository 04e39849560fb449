import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import evrpsolve as ev

TINY_TEXT = """\
NAME: tiny
TYPE: EVRP
DIMENSION: 3
STATIONS: 1
CAPACITY: 2
ENERGY_CAPACITY: 10
ENERGY_CONSUMPTION: 1
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 1 0
3 2 0
4 1 1
DEMAND_SECTION
1 0
2 1
3 1
STATIONS_COORD_SECTION
4
DEPOT_SECTION
1
-1
EOF
"""


def test_parse_tiny_fixture():
    inst = ev.parse_instance(TINY_TEXT)
    assert inst.n == 4
    assert inst.capacity == 2
    assert inst.battery_capacity == 10.0
    assert inst.consumption_rate == 1.0
    assert len(inst.customers) == 2
    assert len(inst.stations) == 1
    assert inst.nodes[inst.depot].kind is ev.NodeKind.DEPOT


def test_parse_demand_exceeding_capacity():
    bad = TINY_TEXT.replace("2 1\n3 1", "2 3\n3 1")
    with pytest.raises(ev.InstanceError, match="exceeds capacity"):
        ev.parse_instance(bad)


def test_parse_missing_header_key():
    bad = TINY_TEXT.replace("CAPACITY: 2\n", "")
    with pytest.raises(ev.InstanceError, match="CAPACITY"):
        ev.parse_instance(bad)


def test_parse_duplicate_node_id():
    bad = TINY_TEXT.replace("3 2 0", "2 2 0")
    with pytest.raises(ev.InstanceError, match="duplicate node id"):
        ev.parse_instance(bad)


def test_parse_demand_for_unknown_node():
    bad = TINY_TEXT.replace("3 1\n", "3 1\n9 1\n")
    with pytest.raises(ev.InstanceError, match="unknown node"):
        ev.parse_instance(bad)


def test_parse_malformed_number_reports_line():
    bad = TINY_TEXT.replace("2 1 0", "2 one 0")
    with pytest.raises(ev.InstanceError, match="line 11"):
        ev.parse_instance(bad)


def test_parse_missing_eof():
    bad = TINY_TEXT.replace("EOF\n", "")
    with pytest.raises(ev.InstanceError, match="EOF"):
        ev.parse_instance(bad)


def test_header_keys_case_insensitive_with_spaces():
    text = TINY_TEXT.replace("CAPACITY: 2", "capacity :2").replace(
        "ENERGY_CAPACITY: 10", "Energy_Capacity : 10"
    )
    inst = ev.parse_instance(text)
    assert inst.capacity == 2
    assert inst.battery_capacity == 10.0


def test_distance_three_four_five():
    inst = ev.build_instance("d", (0, 0), [(3, 4, 1)])
    assert inst.distance(0, 1) == 5.0
    assert inst.distance(0, 0) == 0.0


def test_distance_symmetry_random_pairs():
    rng = random.Random(5)
    customers = [(rng.uniform(-50, 50), rng.uniform(-50, 50), 1) for _ in range(40)]
    inst = ev.build_instance("sym", (0, 0), customers)
    for _ in range(100):
        i, j = rng.randrange(inst.n), rng.randrange(inst.n)
        assert inst.distance(i, j) == inst.distance(j, i)


def test_energy_is_rate_times_distance():
    inst = ev.build_instance("e", (0, 0), [(10, 0, 1)], consumption_rate=1.2)
    assert inst.energy(0, 1) == pytest.approx(12.0)
    assert inst.energy(1, 1) == 0.0
    unit = ev.build_instance("u", (0, 0), [(7, 3, 1)])
    assert unit.energy(0, 1) == unit.distance(0, 1)


def test_energy_distance_ratio(e22):
    for i in (0, 3, 10):
        for j in (1, 5, 20):
            d = e22.distance(i, j)
            assert e22.energy(i, j) / e22.consumption_rate == pytest.approx(d, rel=1e-15)


def test_node_counting_invariant(e22, e23, e30, e51, tiny):
    for inst in (e22, e23, e30, e51, tiny):
        assert len(inst.customers) + len(inst.stations) + 1 == inst.n


def test_roundtrip_fixture_files(e22, e23, e30, e51, tiny):
    for inst in (e22, e23, e30, e51, tiny):
        again = ev.parse_instance(ev.dump_instance(inst))
        assert again == inst


def test_e22_fixture_shape(e22):
    assert e22.name == "E-n22-k4"
    assert len(e22.customers) == 21
    assert len(e22.stations) == 8
    assert e22.capacity == 6000
    assert e22.declared_optimum == pytest.approx(384.67)


def test_declared_vehicles_not_enforced():
    text = TINY_TEXT.replace("TYPE: EVRP", "TYPE: EVRP\nVEHICLES: 1").replace(
        "CAPACITY: 2", "CAPACITY: 1"
    )
    inst = ev.parse_instance(text)
    assert inst.declared_vehicles == 1
    # capacity forces two routes; the declared fleet size does not cap them
    plan = ev.split(list(inst.customers), inst)
    assert len(plan.routes) == 2


coord = st.floats(min_value=-1000, max_value=1000, allow_nan=False, allow_infinity=False)


@settings(max_examples=40, deadline=None)
@given(
    customers=st.lists(st.tuples(coord, coord, st.integers(0, 50)), min_size=1, max_size=12),
    stations=st.lists(st.tuples(coord, coord), max_size=4),
    capacity=st.integers(50, 500),
)
def test_roundtrip_random_instances(customers, stations, capacity):
    inst = ev.build_instance(
        "prop", (0.5, -0.25), customers, stations, capacity=capacity, battery_capacity=77.5
    )
    again = ev.parse_instance(ev.dump_instance(inst))
    assert again == inst
