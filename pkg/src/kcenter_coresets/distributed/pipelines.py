"""
k-center coresets MapReduce pipelines.

This module provides the composable-coreset k-center pipeline, the
generalized local-solver pipeline and the fixed-k pipeline that finishes
with an exhaustive search over a small coreset.
"""

import logging
import time
from itertools import combinations, islice
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..coreset import dual_clustering, epsilon_coreset
from ..exceptions import KCenterUsageError
from ..metric import MetricSpace, WorkCounter
from ..models import ClusteringResult, CoresetResult
from ..solvers import (
    DEFAULT_EXACT_GUARD,
    check_guard,
    efficient_parametric_pruning,
    gonzalez,
    parametric_pruning,
    subset_chunks,
    subset_radii,
)
from .partition import Partition
from .simulation import MachineContext, SimulationTrace, Simulator

logger = logging.getLogger(__name__)

LOCAL_ALGORITHMS = ("gonzalez", "parametric", "efficient")


def _check_params(k: int, epsilon: Optional[float] = None) -> None:
    if k < 1:
        raise KCenterUsageError(f"k must be at least 1, got {k}")
    if epsilon is not None and not epsilon > 0:
        raise KCenterUsageError(f"epsilon must be positive, got {epsilon}")


def _union(pieces: Sequence[Optional[np.ndarray]]) -> Tuple[np.ndarray, np.ndarray]:
    ids: List[np.ndarray] = []
    owners: List[np.ndarray] = []
    for machine, piece in enumerate(pieces):
        if piece is None or len(piece) == 0:
            continue
        ids.append(np.asarray(piece, dtype=np.int64))
        owners.append(np.full(len(piece), machine, dtype=np.int64))
    if not ids:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    merged = np.concatenate(ids)
    provenance = np.concatenate(owners)
    order = np.argsort(merged, kind="stable")
    return merged[order], provenance[order]


def broadcast_assign(sim: Simulator, centers: Sequence[int]) -> Tuple[np.ndarray, float]:
    """Ship ``centers`` to every machine and assign each machine's points.

    Closes the "broadcast" round with |centers| * L items.

    Returns:
        (assignment over all points, radius)
    """
    ordered = np.unique(np.asarray(centers, dtype=np.int64))

    def assign(ctx: MachineContext) -> Tuple[np.ndarray, np.ndarray]:
        sim.hold(ctx.index, len(ctx.indices) + ordered.size)
        rows = sim.space.pairwise(ordered, ctx.indices, ctx.counter)
        nearest = np.argmin(rows, axis=0)
        return ordered[nearest], rows[nearest, np.arange(rows.shape[1])]

    outputs = sim.run_local(assign, desc="Broadcast")
    assignment = np.empty(sim.space.n, dtype=np.int64)
    radius = 0.0
    for ctx, output in zip(sim.contexts(), outputs):
        if ctx is None:
            continue
        assignment[ctx.indices] = output[0]
        radius = max(radius, float(output[1].max()))
    sim.close_round("broadcast", ordered.size * sim.L)
    return assignment, radius


def composable_coreset(sim: Simulator, k: int, epsilon: float) -> CoresetResult:
    """Local nets of every machine, shipped to the aggregator.

    Machine i runs Gonzalez with min(k, |S_i|) centers for radius r_i, then
    covers S_i within epsilon * r_i / 2 by a dual clustering (threshold
    epsilon * r_i / 4). Closes the "local" round with the union size.
    """
    _check_params(k, epsilon)

    def local(ctx: MachineContext) -> Tuple[np.ndarray, float]:
        solution = gonzalez(ctx.space, min(k, ctx.space.n), counter=ctx.counter)
        if solution.radius == 0:
            return ctx.indices[list(solution.centers)], 0.0
        net = dual_clustering(ctx.space, epsilon * solution.radius / 2.0, counter=ctx.counter)
        return ctx.indices[list(net.subset)], solution.radius

    outputs = sim.run_local(local, desc="Local coresets")
    radii = [out[1] for out in outputs if out is not None]
    subset, provenance = _union([out[0] if out is not None else None for out in outputs])
    sim.close_round("local", subset.size)
    sim.hold(0, subset.size)
    logger.info(f"Composable coreset: {subset.size} of {sim.space.n} points shipped to the aggregator")

    return CoresetResult(
        subset=tuple(subset.tolist()),
        cover_radius=max((epsilon * r / 2.0 for r in radii), default=0.0),
        net_threshold=min((epsilon * r / 4.0 for r in radii), default=0.0),
        mode="composable",
        requested=float(k),
        provenance=tuple(provenance.tolist()),
    )


def composable_kcenter(
    space: MetricSpace,
    partition: Partition,
    k: int,
    epsilon: float,
    workers: int = 1,
    progress: bool = False,
) -> Tuple[ClusteringResult, SimulationTrace]:
    """(2 + epsilon)-approximate k-center from composable coresets.

    Rounds: local (coreset shipping), aggregate (Gonzalez on the union),
    broadcast (final centers to every machine).

    Raises:
        KCenterUsageError: If k < 1 or epsilon <= 0
    """
    _check_params(k, epsilon)
    began = time.perf_counter()
    with Simulator(space, partition, workers=workers, progress=progress) as sim:
        union = np.asarray(composable_coreset(sim, k, epsilon).subset, dtype=np.int64)

        def solve(counter: WorkCounter) -> np.ndarray:
            final = gonzalez(space.subspace(union), min(k, union.size), counter=counter)
            return union[list(final.centers)]

        centers = sim.run_aggregate(solve)
        sim.close_round("aggregate", 0)
        assignment, radius = broadcast_assign(sim, centers)
        trace = sim.trace

    result = ClusteringResult(
        algo="composable",
        k=k,
        centers=tuple(np.sort(centers).tolist()),
        assignment=assignment,
        radius=radius,
        epsilon=epsilon,
        work=trace.total_work,
        wall_time=time.perf_counter() - began,
    )
    return result, trace


def generalized_kcenter(
    space: MetricSpace,
    partition: Partition,
    k: int,
    local_algo: str = "gonzalez",
    epsilon: float = 0.1,
    workers: int = 1,
    progress: bool = False,
) -> Tuple[ClusteringResult, SimulationTrace]:
    """Local k-center on every machine, then Gonzalez on the union of local centers.

    With an alpha-approximate local solver that never opens a center inside
    another center's cluster, the radius is at most 2 * alpha * optimal.

    Args:
        space: Metric space
        partition: Machine sets
        k: Number of centers
        local_algo: "gonzalez", "parametric" or "efficient"
        epsilon: Schedule parameter of the efficient local solver
        workers: Threads for machine-local tasks
        progress: Show progress bars

    Returns:
        (ClusteringResult, SimulationTrace)

    Raises:
        KCenterUsageError: If k < 1 or the local algorithm is unknown
    """
    _check_params(k)
    if local_algo not in LOCAL_ALGORITHMS:
        raise KCenterUsageError(f"Unknown local algorithm {local_algo!r}")
    began = time.perf_counter()

    def local(ctx: MachineContext) -> np.ndarray:
        k_local = min(k, ctx.space.n)
        if local_algo == "gonzalez":
            solution = gonzalez(ctx.space, k_local, counter=ctx.counter)
        elif local_algo == "parametric":
            solution = parametric_pruning(ctx.space, k_local, counter=ctx.counter)
        else:
            solution = efficient_parametric_pruning(ctx.space, k_local, epsilon, counter=ctx.counter)
        return ctx.indices[list(solution.centers)]

    with Simulator(space, partition, workers=workers, progress=progress) as sim:
        union, _ = _union(sim.run_local(local, desc="Local solutions"))
        sim.close_round("local", union.size)
        sim.hold(0, union.size)

        def solve(counter: WorkCounter) -> np.ndarray:
            final = gonzalez(space.subspace(union), min(k, union.size), counter=counter)
            return union[list(final.centers)]

        centers = sim.run_aggregate(solve)
        sim.close_round("aggregate", 0)
        assignment, radius = broadcast_assign(sim, centers)
        trace = sim.trace

    result = ClusteringResult(
        algo=f"generalized-{local_algo}",
        k=k,
        centers=tuple(np.sort(centers).tolist()),
        assignment=assignment,
        radius=radius,
        epsilon=epsilon if local_algo == "efficient" else None,
        work=trace.total_work,
        wall_time=time.perf_counter() - began,
    )
    return result, trace


def fixed_k_kcenter(
    space: MetricSpace,
    partition: Partition,
    k: int,
    epsilon: float,
    guard: int = DEFAULT_EXACT_GUARD,
    workers: int = 1,
    progress: bool = False,
) -> Tuple[ClusteringResult, SimulationTrace]:
    """(1 + epsilon)^2-approximate k-center for small fixed k.

    The composable coreset is reduced on the aggregator to an epsilon coreset
    C'. Every machine then scores all k-subsets of C' against its own points
    and the aggregator keeps the subset with the smallest maximum score.

    Rounds: local, aggregate, score (C' to every machine), broadcast.

    Raises:
        KCenterUsageError: If k < 1 or epsilon is outside (0, 2]
        KCenterGuardError: If C(|C'|, k) exceeds ``guard``
    """
    _check_params(k, epsilon)
    if epsilon > 2:
        raise KCenterUsageError(f"epsilon must lie in (0, 2], got {epsilon}")
    began = time.perf_counter()

    with Simulator(space, partition, workers=workers, progress=progress) as sim:
        union = np.asarray(composable_coreset(sim, k, epsilon).subset, dtype=np.int64)

        def reduce(counter: WorkCounter) -> np.ndarray:
            reduced = epsilon_coreset(space.subspace(union), min(k, union.size), epsilon, counter=counter)
            return union[list(reduced.subset)]

        pool = sim.run_aggregate(reduce)
        k_eff = min(k, pool.size)
        bound = check_guard(pool.size, k_eff, guard)
        sim.close_round("aggregate", 0)
        logger.info(f"Fixed-k search over C({pool.size},{k_eff}) = {bound} subsets")

        def score(ctx: MachineContext) -> np.ndarray:
            sim.hold(ctx.index, len(ctx.indices) + pool.size)
            rows = sim.space.pairwise(pool, ctx.indices, ctx.counter)
            return np.concatenate(
                [subset_radii(rows, combos) for combos in subset_chunks(pool.size, k_eff, rows.shape[1])]
            )

        scores = [s for s in sim.run_local(score, desc="Subset scoring") if s is not None]
        sim.close_round("score", pool.size * sim.L)

        def choose(counter: WorkCounter) -> np.ndarray:
            worst = np.max(np.vstack(scores), axis=0)
            best = int(np.argmin(worst))
            return pool[list(next(islice(combinations(range(pool.size), k_eff), best, None)))]

        centers = sim.run_aggregate(choose)
        assignment, radius = broadcast_assign(sim, centers)
        trace = sim.trace

    result = ClusteringResult(
        algo="fixedk",
        k=k,
        centers=tuple(np.sort(centers).tolist()),
        assignment=assignment,
        radius=radius,
        epsilon=epsilon,
        work=trace.total_work,
        wall_time=time.perf_counter() - began,
    )
    return result, trace

