"""
k-center coresets sequential solvers.

This module provides the farthest-first (Gonzalez) traversal, parametric
pruning over squared disk graphs, the efficient geometric-schedule variant
and an exhaustive oracle.
"""

import logging
import math
import time
from dataclasses import dataclass
from itertools import combinations, islice
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import KCenterGuardError, KCenterInternalError, KCenterUsageError
from .graph import VisitOrder
from .metric import MetricSpace, WorkCounter
from .models import ClusteringResult
from .utils import rng_stream

logger = logging.getLogger(__name__)

DEFAULT_EXACT_GUARD = 10_000_000

# Float entries materialized per chunk of enumerated subsets.
_SUBSET_CHUNK_BUDGET = 1 << 21


@dataclass
class RadiusSchedule:
    """Geometric sequence of candidate radii ``lower * growth**t``.

    The sequence stops at the last candidate not exceeding
    ``lower * upper_factor``.
    """

    lower: float
    growth: float
    upper_factor: float

    def __post_init__(self):
        if not self.lower > 0:
            raise KCenterUsageError(f"Schedule lower bound must be positive, got {self.lower}")
        if not self.growth > 1:
            raise KCenterUsageError(f"Schedule growth must exceed 1, got {self.growth}")

    @property
    def upper(self) -> float:
        return self.lower * self.upper_factor

    def candidates(self) -> List[float]:
        values = []
        t = 0
        while True:
            radius = self.lower * self.growth ** t
            if radius > self.upper * (1.0 + 1e-12):
                return values
            values.append(radius)
            t += 1


def check_k(space: MetricSpace, k: int) -> None:
    """Raise a usage error unless 1 <= k <= n."""
    if k < 1 or k > space.n:
        raise KCenterUsageError(f"k must satisfy 1 <= k <= n={space.n}, got k={k}")


def _assign_from_rows(centers: np.ndarray, rows: np.ndarray) -> Tuple[np.ndarray, float]:
    # rows[i] holds distances from centers[i]; centers ascending so argmin favors lower index.
    nearest = np.argmin(rows, axis=0)
    assignment = centers[nearest]
    radius = float(rows[nearest, np.arange(rows.shape[1])].max()) if rows.shape[1] else 0.0
    return assignment, radius


def assign_to_centers(
    space: MetricSpace, centers: Sequence[int], counter: Optional[WorkCounter] = None
) -> Tuple[np.ndarray, float]:
    """Assign every point to its nearest center.

    Args:
        space: Metric space
        centers: Center point indices
        counter: Work counter

    Returns:
        (assignment, radius) where ties go to the lowest center index

    Raises:
        KCenterUsageError: If no centers are given
    """
    ordered = np.unique(np.asarray(centers, dtype=np.int64))
    if ordered.size == 0:
        raise KCenterUsageError("At least one center is required")
    return _assign_from_rows(ordered, space.pairwise(ordered, None, counter))


def gonzalez(
    space: MetricSpace,
    k: int,
    start: Optional[int] = None,
    seed: Optional[int] = None,
    order: Optional[VisitOrder] = None,
    counter: Optional[WorkCounter] = None,
) -> ClusteringResult:
    """Farthest-first traversal.

    The start point is ``start`` if given, else drawn from the ``start`` PRNG
    stream of ``seed``, else the first vertex of ``order``, else point 0.
    Each step adds the point farthest from the chosen centers (lowest index
    on ties). The traversal stops early at radius 0, and trailing centers
    that did not lower the radius are dropped, so centers are pairwise
    farther apart than the returned radius.

    Args:
        space: Metric space
        k: Maximum number of centers
        start: Explicit first center
        seed: Seed for a random first center
        order: Visit order whose first vertex is the start
        counter: Work counter (at most n * k evaluations are charged)

    Returns:
        ClusteringResult tagged "gonzalez"

    Raises:
        KCenterUsageError: If k is out of range or start is not a point
    """
    check_k(space, k)
    began = time.perf_counter()
    n = space.n
    if start is None:
        if seed is not None:
            start = int(rng_stream(seed, "start").integers(n))
        elif order is not None:
            start = int(order.permutation[0])
        else:
            start = 0
    if not 0 <= start < n:
        raise KCenterUsageError(f"Start point {start} out of range for {n} points")

    work = WorkCounter()
    centers = [start]
    rows = [space.distances_from(start, None, work)]
    nearest = rows[0].copy()
    radii = [float(nearest.max())]
    while len(centers) < k and radii[-1] > 0:
        nxt = int(np.argmax(nearest))
        centers.append(nxt)
        rows.append(space.distances_from(nxt, None, work))
        np.minimum(nearest, rows[-1], out=nearest)
        radii.append(float(nearest.max()))

    while len(centers) > 1 and radii[-1] == radii[-2]:
        centers.pop()
        rows.pop()
        radii.pop()

    ordering = np.argsort(centers, kind="stable")
    ordered = np.asarray(centers, dtype=np.int64)[ordering]
    assignment, radius = _assign_from_rows(ordered, np.vstack(rows)[ordering])
    if counter is not None:
        counter.merge(work)
    logger.debug(f"Gonzalez k={k} start={start}: {len(centers)} centers, radius {radius}")

    return ClusteringResult(
        algo="gonzalez",
        k=k,
        centers=tuple(ordered.tolist()),
        assignment=assignment,
        radius=radius,
        seed=seed,
        work=work.evaluations,
        wall_time=time.perf_counter() - began,
    )


def _pruned_centers(
    matrix: np.ndarray, threshold: float, permutation: np.ndarray, k: int
) -> Optional[Tuple[int, ...]]:
    # Greedy independent set of the squared disk graph at ``threshold``,
    # scanned in ``permutation``: a taken vertex blocks every vertex within
    # two hops. None as soon as a (k+1)-th vertex would be taken.
    free = np.ones(matrix.shape[0], dtype=bool)
    taken: List[int] = []
    start = 0
    while True:
        rest = free[permutation[start:]]
        if not rest.any():
            return tuple(sorted(taken))
        if len(taken) == k:
            return None
        position = start + int(np.argmax(rest))
        v = int(permutation[position])
        taken.append(v)
        near = matrix[v] <= threshold
        free &= ~(matrix[near] <= threshold).any(axis=0)
        start = position + 1


def parametric_pruning(
    space: MetricSpace,
    k: int,
    order: Optional[VisitOrder] = None,
    seed: Optional[int] = None,
    counter: Optional[WorkCounter] = None,
) -> ClusteringResult:
    """Parametric pruning over sorted pairwise distances.

    For each candidate radius c (0 and every distinct pairwise distance,
    ascending) build the disk graph at threshold c, square it and take its
    greedy maximal independent set in ``order``. The first candidate whose
    set has at most k vertices wins. Candidates with 4c below the Gonzalez
    radius cannot succeed and are skipped, and the scan of a candidate
    stops as soon as a (k + 1)-th vertex is taken.

    Args:
        space: Metric space
        k: Maximum number of centers
        order: Visit order for the MIS scan (index order by default)
        seed: Seed for a seeded-random visit order when ``order`` is None
        counter: Work counter

    Returns:
        ClusteringResult tagged "parametric" with the winning candidate

    Raises:
        KCenterUsageError: If k is out of range
        KCenterInternalError: If no candidate succeeds
    """
    check_k(space, k)
    began = time.perf_counter()
    n = space.n
    if order is None:
        order = VisitOrder.seeded(n, seed) if seed is not None else VisitOrder.index(n)

    work = WorkCounter()
    reference = gonzalez(space, k, counter=work).radius
    matrix = space.pairwise_matrix(work)
    candidates = np.unique(matrix)
    candidates = candidates[4.0 * candidates >= reference * (1.0 - 1e-9)]

    for candidate in candidates.tolist():
        members = _pruned_centers(matrix, candidate, order.permutation, k)
        if members is not None:
            logger.debug(f"Parametric pruning candidate {candidate}: {len(members)} independent vertices")
            ordered = np.asarray(members, dtype=np.int64)
            assignment, radius = _assign_from_rows(ordered, matrix[ordered])
            if counter is not None:
                counter.merge(work)
            return ClusteringResult(
                algo="parametric",
                k=k,
                centers=tuple(members),
                assignment=assignment,
                radius=radius,
                seed=order.seed,
                work=work.evaluations,
                wall_time=time.perf_counter() - began,
                candidate=candidate,
            )

    raise KCenterInternalError(f"Parametric pruning found no feasible candidate for k={k}")


def _greedy_sweep(
    space: MetricSpace, radius: float, k: int, counter: WorkCounter
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    # Index-order sweep: the first unmarked point opens a center and marks
    # every point within radius. None once a (k+1)-th center would open.
    n = space.n
    marked = np.zeros(n, dtype=bool)
    centers: List[int] = []
    rows: List[np.ndarray] = []
    position = 0
    while True:
        while position < n and marked[position]:
            position += 1
        if position == n:
            return np.asarray(centers, dtype=np.int64), np.vstack(rows)
        if len(centers) == k:
            return None
        row = space.distances_from(position, None, counter)
        marked |= row <= radius
        centers.append(position)
        rows.append(row)


def efficient_parametric_pruning(
    space: MetricSpace,
    k: int,
    epsilon: float,
    counter: Optional[WorkCounter] = None,
) -> ClusteringResult:
    """Parametric pruning over a geometric radius schedule.

    Candidates start at half the Gonzalez radius R0 and grow by (1 + epsilon)
    up to 2(1 + epsilon)R0. Each candidate runs one greedy sweep, so the total
    work is O(nk / epsilon).

    Args:
        space: Metric space
        k: Maximum number of centers
        epsilon: Schedule growth parameter (> 0)
        counter: Work counter

    Returns:
        ClusteringResult tagged "efficient"

    Raises:
        KCenterUsageError: If k is out of range or epsilon <= 0
        KCenterInternalError: If the schedule is exhausted without success
    """
    check_k(space, k)
    if not epsilon > 0:
        raise KCenterUsageError(f"epsilon must be positive, got {epsilon}")
    began = time.perf_counter()

    work = WorkCounter()
    reference = gonzalez(space, k, counter=work).radius
    if reference > 0:
        schedule = RadiusSchedule(lower=reference / 2.0, growth=1.0 + epsilon, upper_factor=4.0 * (1.0 + epsilon))
        candidates = schedule.candidates()
    else:
        candidates = [0.0]

    for candidate in candidates:
        swept = _greedy_sweep(space, candidate, k, work)
        if swept is None:
            logger.debug(f"Efficient pruning candidate {candidate}: more than {k} centers")
            continue
        centers, rows = swept
        assignment, radius = _assign_from_rows(centers, rows)
        if counter is not None:
            counter.merge(work)
        logger.debug(f"Efficient pruning succeeded at candidate {candidate} with {len(centers)} centers")
        return ClusteringResult(
            algo="efficient",
            k=k,
            centers=tuple(centers.tolist()),
            assignment=assignment,
            radius=radius,
            epsilon=epsilon,
            work=work.evaluations,
            wall_time=time.perf_counter() - began,
            candidate=candidate,
        )

    raise KCenterInternalError(
        f"Efficient parametric pruning exhausted its schedule (k={k}, epsilon={epsilon}, R0={reference})"
    )


def subset_chunks(m: int, k: int, n_points: int) -> Iterator[np.ndarray]:
    """Lexicographic k-subsets of range(m) in (chunk, k) index arrays."""
    chunk = max(1, _SUBSET_CHUNK_BUDGET // max(1, k * n_points))
    iterator = combinations(range(m), k)
    while True:
        block = list(islice(iterator, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(-1, k)


def subset_radii(rows: np.ndarray, combos: np.ndarray) -> np.ndarray:
    """Covering radius of each subset.

    ``rows[i]`` holds distances from candidate i to the covered points and
    ``combos`` is a (chunk, k) array of candidate positions.
    """
    if rows.shape[1] == 0:
        return np.zeros(combos.shape[0])
    return rows[combos].min(axis=1).max(axis=1)


def check_guard(m: int, k: int, guard: int) -> int:
    """Return C(m, k), raising KCenterGuardError above ``guard``."""
    bound = math.comb(m, k)
    if bound > guard:
        raise KCenterGuardError(
            f"Exhaustive search over C({m},{k}) = {bound} subsets exceeds the guard of {guard}",
            bound=bound,
            limit=guard,
        )
    return bound


def exact_kcenter(
    space: MetricSpace,
    k: int,
    candidates: Optional[Sequence[int]] = None,
    guard: int = DEFAULT_EXACT_GUARD,
    counter: Optional[WorkCounter] = None,
) -> ClusteringResult:
    """Exhaustive k-center oracle.

    Every k-subset of the candidate pool (all points by default) is scored
    against all points. Among optimal subsets the lexicographically smallest
    index tuple wins.

    Args:
        space: Metric space
        k: Number of centers
        candidates: Optional pool of allowed center indices
        guard: Largest number of subsets enumerated
        counter: Work counter

    Returns:
        ClusteringResult tagged "exact"

    Raises:
        KCenterUsageError: If k is out of range for the pool
        KCenterGuardError: If C(|pool|, k) exceeds the guard
    """
    check_k(space, k)
    began = time.perf_counter()
    pool = np.arange(space.n) if candidates is None else np.unique(np.asarray(candidates, dtype=np.int64))
    if k > pool.size:
        raise KCenterUsageError(f"k={k} exceeds the candidate pool of {pool.size} points")
    check_guard(pool.size, k, guard)

    work = WorkCounter()
    rows = space.pairwise(pool, None, work)
    best_radius = math.inf
    best_combo: Optional[np.ndarray] = None
    for combos in subset_chunks(pool.size, k, space.n):
        radii = subset_radii(rows, combos)
        position = int(np.argmin(radii))
        if radii[position] < best_radius:
            best_radius = float(radii[position])
            best_combo = combos[position]

    selected = best_combo
    assignment, radius = _assign_from_rows(pool[selected], rows[selected])
    if counter is not None:
        counter.merge(work)
    return ClusteringResult(
        algo="exact",
        k=k,
        centers=tuple(pool[selected].tolist()),
        assignment=assignment,
        radius=radius,
        work=work.evaluations,
        wall_time=time.perf_counter() - began,
    )


def is_gonzalez_consistent(result: ClusteringResult, space: MetricSpace) -> bool:
    """Anti-cover certificate of a solution with radius r and centers C.

    True iff the centers are pairwise farther apart than r and form a maximal
    independent set of the disk graph at threshold r, i.e. every point lies
    within r of a center.
    """
    centers = np.asarray(result.centers, dtype=np.int64)
    if centers.size == 0:
        return False
    r = result.radius
    between = space.pairwise(centers, centers)
    off_diagonal = ~np.eye(centers.size, dtype=bool)
    if np.any(between[off_diagonal] <= r):
        return False
    return bool(np.all(space.pairwise(centers, None).min(axis=0) <= r))
