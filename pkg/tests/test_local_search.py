import itertools
import random

import pytest

import evrpsolve as ev
from evrpsolve import Move

from util import random_instance, random_perm


def test_intra_route_distance_basics():
    inst = ev.build_instance("i", (9, 9), [(0, 0, 1), (3, 4, 1)], capacity=5)
    assert ev.intra_route_distance([1], inst) == 0.0
    assert ev.intra_route_distance([1, 2], inst) == pytest.approx(5.0)


def test_intra_route_distance_is_sum_of_legs():
    inst = random_instance(4, 7, 0, capacity=99)
    route = list(inst.customers)
    total = sum(inst.distance(u, v) for u, v in zip(route, route[1:]))
    assert ev.intra_route_distance(route, inst) == pytest.approx(total)


def test_fixpoint_route_unchanged():
    inst = ev.build_instance(
        "f", (0, 0), [(1, 0, 1), (2, 0, 1), (3, 0, 1)], capacity=3
    )
    g = ev.Genotype([1, 2, 3], [3])
    for move in Move:
        out = ev.local_search(g, move, inst)
        assert out.perm == [1, 2, 3]


def test_collinear_route_reordered_to_enumerated_optimum():
    # customers at x=1,2,3 visited as (3,0),(1,0),(2,0); nodes 1,2,3 in order
    inst = ev.build_instance(
        "c", (0, 0), [(1, 0, 1), (2, 0, 1), (3, 0, 1)], capacity=3
    )
    best = min(
        ev.intra_route_distance(list(p), inst)
        for p in itertools.permutations([1, 2, 3])
    )
    g = ev.Genotype([3, 1, 2], [3])
    for move in Move:
        out = ev.local_search(g, move, inst)
        assert ev.intra_route_distance(out.perm, inst) == pytest.approx(best)
        assert ev.intra_route_distance(out.perm, inst) < ev.intra_route_distance(g.perm, inst)


def test_two_opt_uncrosses_square():
    # corners visited (0,0),(1,1),(1,0),(0,1): length 1 + 2*sqrt(2); uncrossed: 3
    inst = ev.build_instance(
        "sq", (5, 5), [(0, 0, 1), (1, 1, 1), (1, 0, 1), (0, 1, 1)], capacity=4
    )
    g = ev.Genotype([1, 2, 3, 4], [4])
    out = ev.local_search(g, Move.TWO_OPT, inst)
    assert ev.intra_route_distance(out.perm, inst) == pytest.approx(3.0)


def test_route_membership_preserved():
    rng = random.Random(17)
    inst = random_instance(17, 12, 0, capacity=5, max_demand=2)
    perm = random_perm(inst, rng)
    plan = ev.split(perm, inst)
    g = ev.Genotype(perm, plan.boundaries())
    for move in Move:
        out = ev.local_search(g, move, inst)
        assert out.boundaries == g.boundaries
        assert sorted(out.perm) == sorted(perm)
        start = 0
        for end in g.boundaries:
            assert sorted(out.perm[start:end]) == sorted(perm[start:end])
            start = end


@pytest.mark.parametrize("move", list(Move))
def test_monotonicity_and_idempotence(move):
    for seed in range(120):
        rng = random.Random(seed)
        inst = random_instance(seed, rng.randint(2, 10), 0, capacity=6, max_demand=3)
        perm = random_perm(inst, rng)
        plan = ev.split(perm, inst)
        g = ev.Genotype(perm, plan.boundaries())
        before = sum(ev.intra_route_distance(r, inst) for r in g.routes())
        out = ev.local_search(g, move, inst)
        after = sum(ev.intra_route_distance(r, inst) for r in out.routes())
        assert after <= before + 1e-9
        again = ev.local_search(out, move, inst)
        assert again.perm == out.perm


def test_requires_boundaries():
    inst = random_instance(1, 4, 0)
    g = ev.Genotype(list(inst.customers))
    with pytest.raises(ValueError):
        ev.local_search(g, Move.TWO_OPT, inst)
