"""Electric vehicle routing solver.

Memetic search over customer permutations, exact dynamic-programming route
splitting, and bin-discretized charging-station insertion, with a benchmark
CLI and brute-force oracles for verification on tiny instances.
"""

from .charging import BinScale, StationPathTable, build_station_table, insert_stations, repair_solution
from .construction import initial_population, stochastic_nn
from .evolution import (
    EvolutionParams,
    distributed_crossover,
    evolve_generation,
    heuristic_move,
    heuristic_swap,
    rank_select,
)
from .instance import (
    Instance,
    InstanceError,
    Node,
    NodeKind,
    build_instance,
    dump_instance,
    load_instance,
    parse_instance,
    save_instance,
)
from .local_search import Move, intra_route_distance, local_search
from .oracles import brute_charge, brute_evrp, brute_split
from .route_split import InfeasibleDemandError, split, split_cost_lower_bound
from .solution import (
    ChargedSolution,
    ConstraintTag,
    Genotype,
    RoutePlan,
    Violation,
    ViolationReport,
    genotype_hash,
    objective,
    solution_from_json,
    solution_from_text,
    solution_to_json,
    solution_to_text,
    validate,
)
from .solver import (
    Evaluator,
    NoFeasibleSolutionError,
    RunResult,
    RunSummary,
    SolverParams,
    run_experiment,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "BinScale",
    "ChargedSolution",
    "ConstraintTag",
    "Evaluator",
    "EvolutionParams",
    "Genotype",
    "Instance",
    "InstanceError",
    "InfeasibleDemandError",
    "Move",
    "Node",
    "NodeKind",
    "NoFeasibleSolutionError",
    "RoutePlan",
    "RunResult",
    "RunSummary",
    "SolverParams",
    "StationPathTable",
    "Violation",
    "ViolationReport",
    "brute_charge",
    "brute_evrp",
    "brute_split",
    "build_instance",
    "build_station_table",
    "distributed_crossover",
    "dump_instance",
    "evolve_generation",
    "genotype_hash",
    "heuristic_move",
    "heuristic_swap",
    "initial_population",
    "insert_stations",
    "intra_route_distance",
    "load_instance",
    "local_search",
    "objective",
    "parse_instance",
    "rank_select",
    "repair_solution",
    "run_experiment",
    "save_instance",
    "solution_from_json",
    "solution_from_text",
    "solution_to_json",
    "solution_to_text",
    "solve",
    "split",
    "split_cost_lower_bound",
    "stochastic_nn",
    "validate",
]
