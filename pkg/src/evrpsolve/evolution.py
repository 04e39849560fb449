"""One memetic generation: rank selection, distributed crossover, heuristic mutations."""

from __future__ import annotations

import bisect
import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .instance import Instance
from .route_split import split
from .solution import Genotype


@dataclass
class EvolutionParams:
    population_size: int = 200
    selection_pressure: float = 1.6
    elite_count: int = 30
    crossover_rate: float = 0.95
    mutation_rate: float = 0.3

    def __post_init__(self) -> None:
        if not 1.0 <= self.selection_pressure <= 2.0:
            raise ValueError("selection pressure must lie in [1, 2]")
        if not 0 <= self.elite_count < self.population_size:
            raise ValueError("elite count must be smaller than the population size")
        for rate in (self.crossover_rate, self.mutation_rate):
            if not 0.0 <= rate <= 1.0:
                raise ValueError("operator rates must be probabilities")


def rank_probabilities(n: int, pressure: float) -> list[float]:
    """Linear-ranking selection probabilities, best rank first."""
    if n == 1:
        return [1.0]
    return [
        (pressure - (2.0 * pressure - 2.0) * r / (n - 1)) / n for r in range(n)
    ]


class _RankSampler:
    """Reusable linear-ranking sampler over a fixed evaluated population."""

    def __init__(self, pop: Sequence[Genotype], pressure: float):
        order = sorted(range(len(pop)), key=lambda i: (pop[i].fitness, i))
        self.ranked = [pop[i] for i in order]
        self.cumulative = list(
            itertools.accumulate(rank_probabilities(len(pop), pressure))
        )

    def draw(self, rng: random.Random) -> Genotype:
        rank = bisect.bisect_right(self.cumulative, rng.random())
        return self.ranked[min(rank, len(self.ranked) - 1)]


def rank_select(pop: Sequence[Genotype], pressure: float, rng: random.Random) -> Genotype:
    """Draw one parent with linear-ranking probability over ascending fitness.

    Infinite fitness values sort to the worst ranks; ties keep input order.
    """
    return _RankSampler(pop, pressure).draw(rng)


def _dedup(seq: list[int]) -> list[int]:
    seen: set[int] = set()
    out = []
    for x in seq:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def crossover_at(p1: Genotype, p2: Genotype, customer: int) -> tuple[Genotype, Genotype]:
    """Deterministic core of the distributed crossover for a chosen customer.

    The routes of each parent containing the customer are merged (first
    occurrence kept), every customer of either subroute is removed from the
    parent, and the merged block is re-inserted at the subroute's original
    start position; the second child uses the reversed blocks in swapped order.
    """
    sub1 = p1.routes()[p1.route_index_of(customer)]
    sub2 = p2.routes()[p2.route_index_of(customer)]
    removed = set(sub1) | set(sub2)

    block1 = _dedup(sub2 + sub1)
    block2 = _dedup(list(reversed(sub1)) + list(reversed(sub2)))

    base1 = [c for c in p1.perm if c not in removed]
    base2 = [c for c in p2.perm if c not in removed]
    pos1 = min(p1.perm.index(sub1[0]), len(base1))
    pos2 = min(p2.perm.index(sub2[0]), len(base2))

    child1 = Genotype(base1[:pos1] + block1 + base1[pos1:])
    child2 = Genotype(base2[:pos2] + block2 + base2[pos2:])
    return child1, child2


def distributed_crossover(
    p1: Genotype, p2: Genotype, rng: random.Random
) -> tuple[Genotype, Genotype]:
    """Recombine two evaluated parents around one uniformly chosen customer."""
    customer = p1.perm[rng.randrange(len(p1.perm))]
    return crossover_at(p1, p2, customer)


def _nearest_other_route(g: Genotype, customer: int, inst: Instance) -> int | None:
    route = g.route_index_of(customer)
    for other in inst.customer_neighbors(customer):
        if g.route_index_of(other) != route:
            return other
    return None


def heuristic_swap(g: Genotype, inst: Instance, rng: random.Random) -> Genotype:
    """Swap a random customer with its nearest customer from a different route."""
    if g.boundaries is None or len(g.boundaries) < 2:
        return g.clone()
    a = g.perm[rng.randrange(len(g.perm))]
    b = _nearest_other_route(g, a, inst)
    if b is None:
        return g.clone()
    perm = list(g.perm)
    ia, ib = perm.index(a), perm.index(b)
    perm[ia], perm[ib] = perm[ib], perm[ia]
    return Genotype(perm)


def heuristic_move(g: Genotype, inst: Instance, rng: random.Random) -> Genotype:
    """Relocate the nearest cross-route customer to just after a random customer."""
    if g.boundaries is None or len(g.boundaries) < 2:
        return g.clone()
    a = g.perm[rng.randrange(len(g.perm))]
    b = _nearest_other_route(g, a, inst)
    if b is None:
        return g.clone()
    perm = list(g.perm)
    perm.remove(b)
    perm.insert(perm.index(a) + 1, b)
    return Genotype(perm)


def _random_permutation(inst: Instance, rng: random.Random) -> Genotype:
    perm = list(inst.customers)
    rng.shuffle(perm)
    return Genotype(perm)


def evolve_generation(
    pop: Sequence[Genotype],
    params: EvolutionParams,
    evaluator: Callable[[Genotype], float],
    rng: random.Random,
) -> list[Genotype]:
    """Produce the next population: elites plus evaluated, hash-distinct offspring.

    Offspring come from rank-selected parents via crossover (at its rate) and
    one heuristic mutation (at its rate, swap or move with equal probability).
    A candidate whose hash already exists — before or after the evaluation
    pipeline reshuffles it — is discarded and regenerated, falling back to a
    uniformly random permutation after 20 attempts per slot.
    """
    inst: Instance = evaluator.instance  # type: ignore[attr-defined]
    for g in pop:
        if g.fitness is None:
            raise ValueError("evolve_generation requires a fully evaluated population")

    by_fitness = sorted(range(len(pop)), key=lambda i: (pop[i].fitness, i))
    nxt: list[Genotype] = []
    seen: set[int] = set()
    for i in by_fitness:
        if len(nxt) == params.elite_count:
            break
        if pop[i].digest not in seen:
            seen.add(pop[i].digest)
            nxt.append(pop[i])

    sampler = _RankSampler(pop, params.selection_pressure)
    pending: list[Genotype] = []
    attempts = 0
    while len(nxt) < params.population_size:
        if not pending:
            p1 = sampler.draw(rng)
            p2 = sampler.draw(rng)
            if rng.random() < params.crossover_rate:
                c1, c2 = distributed_crossover(p1, p2, rng)
            else:
                c1, c2 = p1.clone(), p2.clone()
            for child in (c1, c2):
                if rng.random() < params.mutation_rate:
                    if child.boundaries is None:
                        child.boundaries = split(child.perm, inst).boundaries()
                    if rng.random() < 0.5:
                        child = heuristic_swap(child, inst, rng)
                    else:
                        child = heuristic_move(child, inst, rng)
                pending.append(child)
        candidate = pending.pop(0)

        if attempts >= 20:
            candidate = _random_permutation(inst, rng)
            extra = 0
            while candidate.digest in seen and extra < 100:
                candidate = _random_permutation(inst, rng)
                extra += 1
        elif candidate.digest in seen:
            attempts += 1
            continue

        evaluator(candidate)
        if candidate.digest in seen and attempts < 20:
            # evaluation reorders the permutation; the result may collide too
            attempts += 1
            continue
        seen.add(candidate.digest)
        nxt.append(candidate)
        attempts = 0
    return nxt
