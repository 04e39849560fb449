"""Shared builders for randomized test fixtures."""

from __future__ import annotations

import random

import evrpsolve as ev


def random_instance(
    seed: int,
    n_customers: int,
    n_stations: int,
    capacity: int = 8,
    battery: float | None = None,
    span: float = 20.0,
    max_demand: int = 5,
) -> ev.Instance:
    """A uniform random instance centred on its depot; battery defaults to a
    level that makes most but not all legs chargeable."""
    rng = random.Random(seed)
    customers = [
        (rng.uniform(0, span), rng.uniform(0, span), rng.randint(1, max_demand))
        for _ in range(n_customers)
    ]
    stations = [(rng.uniform(0, span), rng.uniform(0, span)) for _ in range(n_stations)]
    if battery is None:
        battery = rng.uniform(1.2 * span, 2.5 * span)
    return ev.build_instance(
        f"rand-{seed}",
        (span / 2, span / 2),
        customers,
        stations,
        capacity=capacity,
        battery_capacity=battery,
        consumption_rate=1.0,
    )


def random_route_instance(seed: int, n_customers: int, n_stations: int) -> ev.Instance:
    """Instance tuned for single-route charging tests: ample cargo capacity."""
    return random_instance(
        seed,
        n_customers,
        n_stations,
        capacity=10**6,
        max_demand=1,
    )


def synthetic_large(name: str, n_customers: int, n_stations: int, seed: int) -> ev.Instance:
    """Large-format instance in the style of the X benchmark set."""
    rng = random.Random(seed)
    span = 1000.0
    customers = [
        (rng.uniform(0, span), rng.uniform(0, span), rng.randint(1, 100))
        for _ in range(n_customers)
    ]
    stations = [(rng.uniform(0, span), rng.uniform(0, span)) for _ in range(n_stations)]
    depot = (span / 2, span / 2)
    max_dist = max(
        ((x - depot[0]) ** 2 + (y - depot[1]) ** 2) ** 0.5 for x, y, _ in customers
    )
    return ev.build_instance(
        name,
        depot,
        customers,
        stations,
        capacity=1000,
        battery_capacity=2.5 * max_dist,
        consumption_rate=1.0,
    )


def random_perm(inst: ev.Instance, rng: random.Random) -> list[int]:
    perm = list(inst.customers)
    rng.shuffle(perm)
    return perm
