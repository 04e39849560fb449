"""Trilevel solve pipeline: split, local search, charging repair, memetic loop."""

from __future__ import annotations

import math
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .charging import StationPathTable, build_station_table, repair_cost, repair_solution
from .construction import initial_population
from .evolution import EvolutionParams, evolve_generation
from .instance import Instance
from .local_search import Move, local_search
from .route_split import split
from .solution import ChargedSolution, Genotype, validate


class NoFeasibleSolutionError(RuntimeError):
    """Every evaluated individual was infeasible (battery-unreachable customers)."""


@dataclass
class SolverParams:
    evolution: EvolutionParams = field(default_factory=EvolutionParams)
    k_nn: int = 3
    bins_optimize: int = 151
    bins_finish: int = 100001
    budget_multiplier: float = 25000
    max_generations: int | None = None

    def __post_init__(self) -> None:
        if self.bins_finish < self.bins_optimize:
            raise ValueError("finishing bin count must be at least the optimizing one")
        if self.budget_multiplier <= 0:
            raise ValueError("budget multiplier must be positive")
        if self.k_nn < 1:
            raise ValueError("k_nn must be at least 1")


@dataclass
class RunResult:
    best: ChargedSolution
    best_cost: float
    evaluations_used: int
    generations: int
    wall_time: float
    seed: int


@dataclass
class RunSummary:
    """Per-instance statistics over seeded runs (min, mean, sample std)."""

    name: str
    results: list[RunResult]

    @property
    def costs(self) -> list[float]:
        return [r.best_cost for r in self.results]

    @property
    def min(self) -> float:
        return min(self.costs)

    @property
    def mean(self) -> float:
        return statistics.fmean(self.costs)

    @property
    def std(self) -> float:
        if len(self.costs) < 2:
            return 0.0
        return statistics.stdev(self.costs)

    @property
    def avg_evals(self) -> float:
        return statistics.fmean(r.evaluations_used for r in self.results)

    @property
    def avg_seconds(self) -> float:
        return statistics.fmean(r.wall_time for r in self.results)


class Evaluator:
    """The trilevel fitness pipeline with per-genotype caching and a budget counter.

    Evaluating a genotype splits it, improves the customer order with 2-opt and
    swap local search, re-splits the improved order, and prices the plan with
    the charging repair at the optimizing bin count.  The improved permutation,
    boundaries and fitness are written back onto the genotype; infeasible
    repairs yield an infinite fitness.  Cache hits do not touch the counter.
    """

    def __init__(self, inst: Instance, params: SolverParams, table: StationPathTable):
        self.instance = inst
        self.params = params
        self.table = table
        self.evaluations = 0

    def __call__(self, g: Genotype) -> float:
        if g.fitness is not None:
            return g.fitness
        inst = self.instance
        g.boundaries = split(g.perm, inst).boundaries()
        improved = local_search(g, Move.TWO_OPT, inst)
        improved = local_search(improved, Move.SWAP, inst)
        plan = split(improved.perm, inst)
        cost = repair_cost(plan, self.params.bins_optimize, inst, self.table)

        g.perm = improved.perm
        g.boundaries = plan.boundaries()
        g._digest = None
        g.fitness = math.inf if cost is None else cost
        self.evaluations += 1
        return g.fitness


def solve(inst: Instance, params: SolverParams, seed: int) -> RunResult:
    """Run the full memetic search on one instance with one seed.

    The evaluation budget is ``budget_multiplier x (customers + stations + 1)``;
    generations run while a whole one still fits in the budget.  The best
    genotype gets a finishing charging repair at the high bin count, keeping
    whichever of the two repairs is cheaper.
    """
    t0 = time.perf_counter()
    rng = random.Random(seed)
    table = build_station_table(inst)
    evaluator = Evaluator(inst, params, table)
    budget = int(params.budget_multiplier * (len(inst.customers) + len(inst.stations) + 1))

    population = initial_population(
        inst, params.evolution.population_size, params.k_nn, rng
    )
    evaluated: list[Genotype] = []
    for g in population:
        if evaluator.evaluations >= budget:
            break
        evaluator(g)
        evaluated.append(g)
    population = evaluated
    if not population:
        raise NoFeasibleSolutionError("budget too small to evaluate any individual")

    per_generation = params.evolution.population_size - params.evolution.elite_count
    generations = 0
    while (
        params.max_generations is None or generations < params.max_generations
    ) and evaluator.evaluations + per_generation <= budget:
        population = evolve_generation(population, params.evolution, evaluator, rng)
        generations += 1

    best = min(population, key=lambda g: g.fitness)
    if math.isinf(best.fitness):
        raise NoFeasibleSolutionError(
            f"no feasible solution found for {inst.name!r}: "
            "some customers are unreachable under the battery constraints"
        )

    plan = split(best.perm, inst)
    charged = repair_solution(plan, params.bins_optimize, inst, table)
    finished = repair_solution(plan, params.bins_finish, inst, table)
    if finished is not None and (
        charged is None or finished.total_distance <= charged.total_distance
    ):
        solution = finished
    else:
        solution = charged
    assert solution is not None

    report = validate(solution, inst)
    if not report.ok:
        raise RuntimeError(f"solver produced an infeasible solution:\n{report}")

    return RunResult(
        best=solution,
        best_cost=solution.total_distance,
        evaluations_used=evaluator.evaluations,
        generations=generations,
        wall_time=time.perf_counter() - t0,
        seed=seed,
    )


def _solve_task(args: tuple[Instance, SolverParams, int]) -> RunResult:
    inst, params, seed = args
    return solve(inst, params, seed)


def run_experiment(
    inst: Instance,
    params: SolverParams,
    runs: int,
    seeds: list[int] | None = None,
    parallel: int = 1,
) -> RunSummary:
    """Execute independent seeded runs and aggregate their best costs."""
    if runs < 1:
        raise ValueError("need at least one run")
    if seeds is None:
        seeds = list(range(1, runs + 1))
    if len(seeds) != runs or len(set(seeds)) != runs:
        raise ValueError("seeds must be distinct and match the run count")

    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(_solve_task, [(inst, params, s) for s in seeds]))
    else:
        results = [solve(inst, params, s) for s in seeds]
    return RunSummary(inst.name, results)
