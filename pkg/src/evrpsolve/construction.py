"""Initial population construction via stochastic nearest-neighbour tours."""

from __future__ import annotations

import random

from .instance import Instance
from .solution import Genotype


def stochastic_nn(inst: Instance, k: int, rng: random.Random) -> Genotype:
    """Grow a customer permutation by random choice among the k nearest unvisited.

    Starts from the depot; each step picks uniformly among the ``k`` closest
    not-yet-visited customers of the most recently added node (all remaining
    ones when fewer than ``k`` are left).  Equidistant candidates are ordered
    by node index, so the draw sequence is fully determined by the seed.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    unvisited = set(inst.customers)
    perm: list[int] = []
    last = inst.depot
    while unvisited:
        candidates = []
        for c in inst.customer_neighbors(last):
            if c in unvisited:
                candidates.append(c)
                if len(candidates) == k:
                    break
        choice = candidates[rng.randrange(len(candidates))]
        perm.append(choice)
        unvisited.remove(choice)
        last = choice
    return Genotype(perm)


def initial_population(
    inst: Instance, size: int, k: int, rng: random.Random
) -> list[Genotype]:
    """Build up to ``size`` hash-distinct genotypes via :func:`stochastic_nn`.

    Duplicates are discarded; after ``100 * size`` construction attempts the
    remainder is filled with uniformly random permutations (also deduplicated,
    under the same attempt cap), so tiny instances may yield fewer individuals.
    """
    if size < 1:
        raise ValueError("population size must be at least 1")
    cap = 100 * size
    population: list[Genotype] = []
    seen: set[int] = set()

    attempts = 0
    while len(population) < size and attempts < cap:
        attempts += 1
        g = stochastic_nn(inst, k, rng)
        if g.digest not in seen:
            seen.add(g.digest)
            population.append(g)

    attempts = 0
    while len(population) < size and attempts < cap:
        attempts += 1
        perm = list(inst.customers)
        rng.shuffle(perm)
        g = Genotype(perm)
        if g.digest not in seen:
            seen.add(g.digest)
            population.append(g)
    return population
