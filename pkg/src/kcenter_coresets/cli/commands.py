"""
k-center coresets CLI commands.

This module provides the command-line interface: instance ingestion and
generation, solver, coreset and simulation drivers, the comparison harness
and trade-off table emission.
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Any, Callable, Dict, List, Optional, Tuple

from tqdm import tqdm

from ..config import (
    ALGORITHMS,
    LOCAL_ALGORITHMS,
    OUTPUT_FORMATS,
    PARTITION_STRATEGIES,
    PIPELINES,
    KCenterConfig,
    RunConfig,
)
from ..coreset import TRADEOFF_HEADER, coreset_for_k, dual_clustering, epsilon_coreset, tradeoff_table
from ..distributed.dbscan import dbscan_coreset
from ..distributed.partition import partition
from ..distributed.pipelines import composable_kcenter, fixed_k_kcenter, generalized_kcenter
from ..distributed.simulation import trace_report
from ..exceptions import (
    KCenterConfigError,
    KCenterError,
    KCenterGuardError,
    KCenterUsageError,
)
from ..generators import generate, parse_generator_spec
from ..graph import VisitOrder
from ..logger import setup_logger
from ..metric import MetricSpace, validate_metric
from ..models import CompareReport, CompareRow
from ..solvers import efficient_parametric_pruning, exact_kcenter, gonzalez, parametric_pruning
from ..utils import (
    load_distance_matrix,
    load_json_config,
    load_points_csv,
    save_points_csv,
    to_csv,
    to_json,
    write_text,
)

DEFAULT_EPSILON = 0.1
DEFAULT_PIPELINE_EPSILON = 0.5
DEFAULT_COMPARE_EPSILON = 0.01


def exit_code_for(error: KCenterError) -> int:
    """Exit code of a toolkit error: 2 for usage and configuration, else 1."""
    if isinstance(error, KCenterGuardError):
        return 1
    if isinstance(error, (KCenterUsageError, KCenterConfigError)):
        return 2
    return 1


def _prepare(
    args: argparse.Namespace, logger: logging.Logger, validate: bool = True
) -> Tuple[KCenterConfig, RunConfig]:
    env = KCenterConfig.from_env(args.env_file)
    if env.log_file:
        setup_logger(level=logger.level, log_file=env.log_file)
    logger.debug(f"Environment configuration: {env.to_dict()}")
    run = RunConfig.from_namespace(args)
    if args.seed is None:
        run = replace(run, seed=env.seed)
    if args.workers is None:
        run = replace(run, workers=env.workers)
    if validate:
        run.validate()
    return env, run


def load_space(run: RunConfig, env: KCenterConfig, check_matrix: bool = True) -> MetricSpace:
    """Build the metric space named by ``--input``, ``--matrix`` or ``--gen``.

    Explicit matrices up to the validation limit are checked and rejected
    when an axiom fails.

    Raises:
        KCenterUsageError: If the matrix is not a metric
        KCenterFileError: If an input file cannot be read
    """
    if run.input:
        return MetricSpace.euclidean(load_points_csv(run.input), run.doubling_dim)
    if run.matrix:
        space = MetricSpace.from_matrix(load_distance_matrix(run.matrix), run.doubling_dim)
        if check_matrix:
            report = validate_metric(space, limit=env.validate_limit)
            if not report.valid:
                first = report.violations[0]
                raise KCenterUsageError(
                    f"Distance matrix is not a metric: {first.axiom} violated at {first.witness} ({first.detail})"
                )
        return space
    return MetricSpace.euclidean(generate(parse_generator_spec(run.gen, run.seed)), run.doubling_dim)


def _emit(text: str, run: RunConfig) -> None:
    write_text(text, run.out)


def _solve_once(space: MetricSpace, run: RunConfig, env: KCenterConfig, algo: str, seed: Optional[int]):
    if algo == "gonzalez":
        return gonzalez(space, run.k, seed=seed)
    if algo == "parametric":
        return parametric_pruning(space, run.k, seed=seed)
    if algo == "efficient":
        return efficient_parametric_pruning(space, run.k, run.epsilon or DEFAULT_EPSILON)
    return exact_kcenter(space, run.k, guard=env.exact_guard)


def solve_command(args: argparse.Namespace) -> int:
    """Solve command.

    Args:
        args: Command-line arguments

    Returns:
        Exit code
    """
    logger = setup_logger(level=logging.DEBUG if args.verbose else logging.INFO)

    try:
        env, run = _prepare(args, logger)
        space = load_space(run, env)
        logger.info(f"Solving k={run.k} with {run.algo} on {space.n} points")

        seed = run.seed if run.randomize else None
        result = _solve_once(space, run, env, run.algo, seed)
        record = result.to_record(timing=not run.no_timing)
        record["n"] = space.n

        if run.format == "csv":
            text = to_csv(
                ("algo", "k", "radius", "centers", "work", "wall_time_s"),
                [(record["algo"], record["k"], record["radius"], " ".join(str(c) for c in record["centers"]),
                  record["work"], record["wall_time_s"])],
            )
        else:
            text = to_json(record)
        _emit(text, run)
        logger.info(f"Radius {result.radius} with {result.size} centers")
        return 0
    except KCenterError as e:
        logger.error(f"Error: {str(e)}")
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Unexpected error: {str(e)}")
        return 1


def _simulate_once(space: MetricSpace, run: RunConfig, env: KCenterConfig) -> Dict[str, Any]:
    parts = partition(space, run.L, run.partition, run.m, run.seed)
    epsilon = run.epsilon if run.epsilon is not None else DEFAULT_PIPELINE_EPSILON

    if run.pipeline == "composable":
        result, trace = composable_kcenter(space, parts, run.k, epsilon, workers=run.workers)
    elif run.pipeline == "generalized":
        result, trace = generalized_kcenter(
            space, parts, run.k, run.local_algo, epsilon=run.epsilon or DEFAULT_EPSILON, workers=run.workers
        )
    elif run.pipeline == "fixedk":
        result, trace = fixed_k_kcenter(space, parts, run.k, epsilon, guard=env.exact_guard, workers=run.workers)
    else:
        if run.eps is None:
            raise KCenterConfigError("--eps is required for the dbscan pipeline")
        result, trace = dbscan_coreset(
            space, parts, run.eps, run.minpts, link_factor=run.link_factor, workers=run.workers
        )

    return {
        "pipeline": run.pipeline,
        "n": space.n,
        "partition": parts.to_record(),
        "result": result.to_record(timing=not run.no_timing),
        "trace": trace_report(trace),
    }


def simulate_command(args: argparse.Namespace) -> int:
    """Simulate command.

    With ``--config`` the JSON file either overrides flags for one run or
    lists several runs under "scenarios".

    Args:
        args: Command-line arguments

    Returns:
        Exit code
    """
    logger = setup_logger(level=logging.DEBUG if args.verbose else logging.INFO)

    try:
        # Scenario files may supply the input source.
        env, run = _prepare(args, logger, validate=not args.config)
        scenarios = None
        if args.config:
            scenario_file = load_json_config(args.config)
            scenarios = scenario_file.get("scenarios")
            if scenarios is None:
                runs = [run.with_overrides(scenario_file)]
            elif isinstance(scenarios, list) and all(isinstance(s, dict) for s in scenarios):
                runs = [run.with_overrides(s) for s in scenarios]
            else:
                raise KCenterConfigError("\"scenarios\" must be a list of objects")
            for scenario in runs:
                scenario.validate()
        else:
            runs = [run]

        outputs = []
        for scenario in tqdm(runs, desc="Scenarios", disable=len(runs) == 1 or None):
            space = load_space(scenario, env)
            logger.info(f"Simulating {scenario.pipeline} on {space.n} points over {scenario.L} machines")
            outputs.append(_simulate_once(space, scenario, env))

        record: Dict[str, Any] = outputs[0] if scenarios is None else {"scenarios": outputs}
        _emit(to_json(record), run)
        return 0
    except KCenterError as e:
        logger.error(f"Error: {str(e)}")
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Unexpected error: {str(e)}")
        return 1


def _compare_jobs(space: MetricSpace, run: RunConfig, env: KCenterConfig) -> List[Callable[[], CompareRow]]:
    jobs: List[Callable[[], CompareRow]] = []
    seeds = list(range(run.seed, run.seed + run.reps))
    epsilon = run.epsilon if run.epsilon is not None else DEFAULT_COMPARE_EPSILON

    def row(k: int, algo: str, seed: int, solve: Callable[[], Any]) -> Callable[[], CompareRow]:
        def job() -> CompareRow:
            result = solve()
            return CompareRow(k=k, algo=algo, seed=seed, radius=result.radius, work=result.work,
                              wall_time=result.wall_time)
        return job

    for k in run.k_values():
        for seed in seeds:
            if run.mapreduce:
                parts = partition(space, run.L, "random", run.m, seed)
                jobs.append(row(k, "greedy-mr", seed,
                                lambda k=k, parts=parts: generalized_kcenter(space, parts, k, "gonzalez")[0]))
                jobs.append(row(k, "efficient-mr", seed,
                                lambda k=k, parts=parts: generalized_kcenter(
                                    space, parts, k, "efficient", epsilon=epsilon)[0]))
            else:
                jobs.append(row(k, "gonzalez", seed, lambda k=k, seed=seed: gonzalez(space, k, seed=seed)))
                jobs.append(row(k, "parametric", seed,
                                lambda k=k, seed=seed: parametric_pruning(space, k, seed=seed)))
        if run.oracle:
            jobs.append(row(k, "exact", run.seed, lambda k=k: exact_kcenter(space, k, guard=env.exact_guard)))
    return jobs


def compare_command(args: argparse.Namespace) -> int:
    """Compare command.

    Args:
        args: Command-line arguments

    Returns:
        Exit code
    """
    logger = setup_logger(level=logging.DEBUG if args.verbose else logging.INFO)

    try:
        env, run = _prepare(args, logger)
        space = load_space(run, env)
        jobs = _compare_jobs(space, run, env)
        logger.info(f"Running {len(jobs)} comparison jobs on {space.n} points")

        if run.workers > 1:
            with ThreadPoolExecutor(max_workers=run.workers) as executor:
                rows = list(tqdm(executor.map(lambda job: job(), jobs), total=len(jobs), desc="Comparing",
                                 disable=None))
        else:
            rows = [job() for job in tqdm(jobs, desc="Comparing", disable=None)]

        report = CompareReport(rows=rows)
        if run.format == "csv":
            text = to_csv(CompareReport.CSV_HEADER, report.summary())
        else:
            text = to_json(report.to_record(timing=not run.no_timing))
        _emit(text, run)
        return 0
    except KCenterError as e:
        logger.error(f"Error: {str(e)}")
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Unexpected error: {str(e)}")
        return 1


def _visit_order(space: MetricSpace, run: RunConfig) -> VisitOrder:
    return VisitOrder.seeded(space.n, run.seed) if run.randomize else VisitOrder.index(space.n)


def tradeoff_command(args: argparse.Namespace) -> int:
    """Trade-off command.

    Args:
        args: Command-line arguments

    Returns:
        Exit code
    """
    logger = setup_logger(level=logging.DEBUG if args.verbose else logging.INFO)

    try:
        env, run = _prepare(args, logger)
        space = load_space(run, env)
        rows = tradeoff_table(space, run.k, run.max_R, _visit_order(space, run), base_radius=run.radius)

        if (args.format or "csv") == "csv":
            text = to_csv(TRADEOFF_HEADER, [(r.R, r.size, r.cover_radius) for r in rows])
        else:
            text = to_json({"k": run.k, "rows": [{"R": r.R, "size": r.size, "cover_radius": r.cover_radius}
                                                 for r in rows]})
        _emit(text, run)
        return 0
    except KCenterError as e:
        logger.error(f"Error: {str(e)}")
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Unexpected error: {str(e)}")
        return 1


def coreset_command(args: argparse.Namespace) -> int:
    """Coreset command.

    ``--radius`` runs a dual clustering, ``--epsilon`` the epsilon coreset,
    otherwise the coreset for k at ``--halvings`` (default 0).

    Args:
        args: Command-line arguments

    Returns:
        Exit code
    """
    logger = setup_logger(level=logging.DEBUG if args.verbose else logging.INFO)

    try:
        env, run = _prepare(args, logger)
        space = load_space(run, env)
        order = _visit_order(space, run)
        if run.radius is not None:
            result = dual_clustering(space, run.radius, order)
        elif run.epsilon is not None:
            result = epsilon_coreset(space, run.k, run.epsilon, order)
        else:
            result = coreset_for_k(space, run.k, run.halvings or 0, order)
        record = result.to_record()
        record["n"] = space.n
        _emit(to_json(record), run)
        logger.info(f"Coreset of {result.size} points, cover radius {result.cover_radius}")
        return 0
    except KCenterError as e:
        logger.error(f"Error: {str(e)}")
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Unexpected error: {str(e)}")
        return 1


def generate_command(args: argparse.Namespace) -> int:
    """Generate command.

    Args:
        args: Command-line arguments

    Returns:
        Exit code
    """
    logger = setup_logger(level=logging.DEBUG if args.verbose else logging.INFO)

    try:
        env, run = _prepare(args, logger)
        if not run.gen:
            raise KCenterConfigError("generate requires --gen")
        points = generate(parse_generator_spec(run.gen, run.seed))
        _emit(save_points_csv(points), run)
        logger.info(f"Generated {points.n} points in {points.dim} dimensions")
        return 0
    except KCenterError as e:
        logger.error(f"Error: {str(e)}")
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Unexpected error: {str(e)}")
        return 1


def validate_command(args: argparse.Namespace) -> int:
    """Validate command. Exits 1 when an axiom is violated.

    Args:
        args: Command-line arguments

    Returns:
        Exit code
    """
    logger = setup_logger(level=logging.DEBUG if args.verbose else logging.INFO)

    try:
        env, run = _prepare(args, logger)
        space = load_space(run, env, check_matrix=False)
        report = validate_metric(space, limit=None if run.force else env.validate_limit)
        _emit(to_json(report.to_record()), run)
        if not report.valid:
            logger.warning(f"Metric validation failed: {report.message}")
            return 1
        return 0
    except KCenterError as e:
        logger.error(f"Error: {str(e)}")
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Unexpected error: {str(e)}")
        return 1


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_argument_group("input")
    source.add_argument("--input", help="CSV file of points (numeric columns, optional header)")
    source.add_argument("--matrix", help="Square distance matrix file (whitespace or comma separated)")
    source.add_argument("--gen", help="Generator spec, e.g. line:5:0.5, uniform:100:2, gauss:500:2:3:0.1, cover:3:1")
    parser.add_argument("--seed", type=int, default=None, help="Seed for every PRNG stream (default KCENTER_SEED or 0)")
    parser.add_argument("--doubling-dim", dest="doubling_dim", type=float, default=None,
                        help="Doubling dimension hint of the input")
    parser.add_argument("--out", help="Output file (stdout if omitted)", default=None)
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="Output format")
    parser.add_argument("--workers", type=int, default=None,
                        help="Threads for machine-local tasks and repetitions (default KCENTER_WORKERS or 1)")
    parser.add_argument("--no-timing", dest="no_timing", action="store_true",
                        help="Write wall_time_s as 0.0 so repeated runs are byte-identical")


def setup_parser() -> argparse.ArgumentParser:
    """Set up command-line argument parser.

    Returns:
        Argument parser
    """
    parser = argparse.ArgumentParser(
        prog="kcenter-coresets",
        description="k-center composable coreset toolkit",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument(
        "--verbose", "-v", action="store_true", help="Enable verbose logging"
    )
    parser.add_argument(
        "--env-file", "-e", help="Path to .env file", default=None
    )

    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    # Solve command
    solve_parser = subparsers.add_parser("solve", help="Run a sequential k-center solver")
    _add_common_arguments(solve_parser)
    solve_parser.add_argument("--algo", choices=ALGORITHMS, default="gonzalez", help="Solver")
    solve_parser.add_argument("--k", type=int, default=2, help="Number of centers")
    solve_parser.add_argument("--epsilon", type=float, default=None, help="Efficient pruning schedule growth")
    solve_parser.add_argument("--randomize", action="store_true",
                              help="Seeded-random start point or visit order")
    solve_parser.set_defaults(func=solve_command)

    # Simulate command
    simulate_parser = subparsers.add_parser("simulate", help="Run a simulated MapReduce pipeline")
    _add_common_arguments(simulate_parser)
    simulate_parser.add_argument("--pipeline", choices=PIPELINES, default="composable", help="Pipeline")
    simulate_parser.add_argument("--k", type=int, default=2, help="Number of centers")
    simulate_parser.add_argument("--epsilon", type=float, default=None, help="Coreset accuracy")
    simulate_parser.add_argument("--local-algo", dest="local_algo", choices=LOCAL_ALGORITHMS, default="gonzalez",
                                 help="Local solver of the generalized pipeline")
    simulate_parser.add_argument("--eps", type=float, default=None, help="DBSCAN radius")
    simulate_parser.add_argument("--minpts", type=int, default=1, help="DBSCAN core threshold")
    simulate_parser.add_argument("--link-factor", dest="link_factor", type=float, default=2.0,
                                 help="DBSCAN union linking threshold as a multiple of eps")
    simulate_parser.add_argument("--L", dest="L", type=int, default=1, help="Number of machines")
    simulate_parser.add_argument("--m", dest="m", type=int, default=None, help="Per-machine capacity")
    simulate_parser.add_argument("--partition", choices=PARTITION_STRATEGIES, default="arbitrary",
                                 help="Partition strategy")
    simulate_parser.add_argument("--config", default=None, help="JSON scenario file")
    simulate_parser.set_defaults(func=simulate_command)

    # Compare command
    compare_parser = subparsers.add_parser("compare", help="Compare randomized solvers across seeds")
    _add_common_arguments(compare_parser)
    compare_parser.add_argument("--k", type=int, default=2, help="Number of centers")
    compare_parser.add_argument("--k-range", dest="k_range", default=None, help="k values, e.g. 2-10 or 2,4,8")
    compare_parser.add_argument("--reps", type=int, default=1, help="Repetitions (seeds seed..seed+reps-1)")
    compare_parser.add_argument("--epsilon", type=float, default=None, help="Efficient pruning growth")
    compare_parser.add_argument("--mapreduce", action="store_true",
                                help="Compare greedy and efficient distributed pipelines")
    compare_parser.add_argument("--oracle", action="store_true", help="Add the exact optimum per k")
    compare_parser.add_argument("--L", dest="L", type=int, default=2, help="Machines for --mapreduce")
    compare_parser.add_argument("--m", dest="m", type=int, default=None, help="Per-machine capacity")
    compare_parser.set_defaults(func=compare_command)

    # Trade-off command
    tradeoff_parser = subparsers.add_parser("tradeoff", help="Emit the coreset size/radius trade-off table")
    _add_common_arguments(tradeoff_parser)
    tradeoff_parser.add_argument("--k", type=int, default=2, help="Number of centers")
    tradeoff_parser.add_argument("--max-R", dest="max_R", type=int, default=3, help="Largest halving depth")
    tradeoff_parser.add_argument("--randomize", action="store_true", help="Seeded-random visit order")
    tradeoff_parser.add_argument("--radius", type=float, default=None,
                                 help="Cover radius of row 0 (default: Gonzalez radius for k)")
    tradeoff_parser.set_defaults(func=tradeoff_command)

    # Coreset command
    coreset_parser = subparsers.add_parser("coreset", help="Compute a coreset or dual clustering")
    _add_common_arguments(coreset_parser)
    coreset_parser.add_argument("--k", type=int, default=2, help="Number of centers")
    coreset_parser.add_argument("--halvings", type=int, default=None, help="Halving depth R")
    coreset_parser.add_argument("--epsilon", type=float, default=None, help="Accuracy of the epsilon coreset")
    coreset_parser.add_argument("--radius", type=float, default=None, help="Dual clustering radius")
    coreset_parser.add_argument("--randomize", action="store_true", help="Seeded-random visit order")
    coreset_parser.set_defaults(func=coreset_command)

    # Generate command
    generate_parser = subparsers.add_parser("generate", help="Write a synthetic point set as CSV")
    _add_common_arguments(generate_parser)
    generate_parser.set_defaults(func=generate_command)

    # Validate command
    validate_parser = subparsers.add_parser("validate", help="Check the metric axioms of the input")
    _add_common_arguments(validate_parser)
    validate_parser.add_argument("--force", action="store_true", help="Validate matrices above the size limit")
    validate_parser.set_defaults(func=validate_command)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point.

    Args:
        argv: Command-line arguments (sys.argv[1:] if None)

    Returns:
        Exit code
    """
    parser = setup_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 0

    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
