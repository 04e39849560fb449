"""Command-line interface: solve single instances, run benchmarks, validate solutions."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from .evolution import EvolutionParams
from .instance import Instance, InstanceError, load_instance
from .oracles import brute_evrp
from .solution import (
    ChargedSolution,
    objective,
    solution_from_text,
    solution_to_json,
    solution_to_text,
    validate,
)
from .solver import NoFeasibleSolutionError, SolverParams, run_experiment, solve

CSV_HEADER = ["name", "min", "mean", "std", "runs", "avg_evals", "avg_seconds"]


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--population", type=int, default=200, help="population size")
    parser.add_argument("--elites", type=int, default=30, help="elite individuals per generation")
    parser.add_argument("--pressure", type=float, default=1.6, help="rank-selection pressure")
    parser.add_argument("--knn", type=int, default=3, help="nearest-neighbour candidates")
    parser.add_argument("--bins", type=int, default=151, help="battery bins while optimizing")
    parser.add_argument("--bins-finish", type=int, default=100001, help="battery bins for the finishing repair")
    parser.add_argument("--budget-multiplier", type=float, default=25000, help="evaluation budget per node")
    parser.add_argument("--max-generations", type=int, default=None, help="optional generation cap")
    parser.add_argument("--crossover-rate", type=float, default=0.95)
    parser.add_argument("--mutation-rate", type=float, default=0.3)


def _params_from(args: argparse.Namespace) -> SolverParams:
    return SolverParams(
        evolution=EvolutionParams(
            population_size=args.population,
            elite_count=args.elites,
            selection_pressure=args.pressure,
            crossover_rate=args.crossover_rate,
            mutation_rate=args.mutation_rate,
        ),
        k_nn=args.knn,
        bins_optimize=args.bins,
        bins_finish=args.bins_finish,
        budget_multiplier=args.budget_multiplier,
        max_generations=args.max_generations,
    )


def _load(path: str) -> Instance:
    try:
        return load_instance(path)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(1) from None
    except InstanceError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(1) from None


def cmd_solve(args: argparse.Namespace) -> int:
    inst = _load(args.instance)
    params = _params_from(args)
    try:
        result = solve(inst, params, args.seed)
    except NoFeasibleSolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.format == "json":
        solution_text = solution_to_json(result.best, inst)
    else:
        solution_text = solution_to_text(result.best, inst)
    if args.out:
        Path(args.out).write_text(solution_text, encoding="utf-8")
    else:
        sys.stdout.write(solution_text)

    report = {
        "instance": inst.name,
        "cost": result.best_cost,
        "evaluations": result.evaluations_used,
        "generations": result.generations,
        "seed": result.seed,
        "wall_time_s": result.wall_time,
        "feasible": True,
    }
    if args.oracle:
        oracle_cost, _ = brute_evrp(inst)
        report["oracle_cost"] = oracle_cost
        report["oracle_gap"] = result.best_cost - oracle_cost
    line = json.dumps(report)
    if args.report:
        Path(args.report).write_text(line + "\n", encoding="utf-8")
    else:
        print(line)
    return 0


def _instance_paths(paths: list[str]) -> list[Path]:
    out: list[Path] = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            out.extend(sorted(path.glob("*.evrp")))
        else:
            out.append(path)
    return out


def cmd_bench(args: argparse.Namespace) -> int:
    params = _params_from(args)
    rows = []
    for path in _instance_paths(args.instances):
        try:
            inst = load_instance(str(path))
            seeds = [args.seed_base + i for i in range(args.runs)]
            summary = run_experiment(inst, params, args.runs, seeds, parallel=args.parallel)
            row = {
                "name": inst.name,
                "min": f"{summary.min:.2f}",
                "mean": f"{summary.mean:.2f}",
                "std": f"{summary.std:.2f}",
                "runs": str(args.runs),
                "avg_evals": f"{summary.avg_evals:.1f}",
                "avg_seconds": f"{summary.avg_seconds:.3f}",
            }
        except (OSError, InstanceError, NoFeasibleSolutionError, ValueError) as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            row = {key: "ERROR" for key in CSV_HEADER}
            row["name"] = path.stem
            row["runs"] = "0"
        rows.append(row)

    out = csv.DictWriter(
        open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout,
        fieldnames=CSV_HEADER,
    )
    out.writeheader()
    for row in rows:
        out.writerow(row)
    if args.json:
        Path(args.json).write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    inst = _load(args.instance)
    try:
        text = Path(args.solution).read_text(encoding="utf-8")
        routes, declared = solution_from_text(text, inst)
    except OSError as exc:
        print(f"error: cannot read {args.solution}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {args.solution}: {exc}", file=sys.stderr)
        return 1

    sol = ChargedSolution.from_routes(inst, routes)
    cost = objective(sol, inst)
    report = validate(sol, inst)
    print(f"cost {cost!r}")
    if declared is not None and not math.isclose(cost, declared, rel_tol=1e-9, abs_tol=1e-6):
        print(f"note: declared cost {declared!r} differs from recomputed {cost!r}")
    if report.ok:
        print("feasible")
        return 0
    print(report)
    return 3


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="evrpsolve",
        description="Electric vehicle routing: memetic search with exact route "
        "splitting and charging-station insertion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance")
    p_solve.add_argument("instance")
    p_solve.add_argument("--seed", type=int, default=1)
    _add_solver_flags(p_solve)
    p_solve.add_argument("--out", help="write the solution to this path (default: stdout)")
    p_solve.add_argument("--report", help="write the JSON report to this path (default: stdout)")
    p_solve.add_argument("--format", choices=("text", "json"), default="text")
    p_solve.add_argument(
        "--oracle",
        action="store_true",
        help="also compute the brute-force optimum (tiny instances only)",
    )
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="run the benchmark protocol over instances")
    p_bench.add_argument("instances", nargs="+", help="instance files or directories")
    p_bench.add_argument("--runs", type=int, default=20)
    p_bench.add_argument("--seed-base", type=int, default=1)
    p_bench.add_argument("--parallel", type=int, default=1)
    _add_solver_flags(p_bench)
    p_bench.add_argument("--out", help="CSV output path (default: stdout)")
    p_bench.add_argument("--json", help="also write rows as JSON to this path")
    p_bench.set_defaults(func=cmd_bench)

    p_val = sub.add_parser("validate", help="validate a solution file against an instance")
    p_val.add_argument("instance")
    p_val.add_argument("solution")
    p_val.set_defaults(func=cmd_validate)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
