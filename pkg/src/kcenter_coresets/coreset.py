"""
k-center coresets offline coresets.

This module provides dual clustering through squared disk graphs, the
coreset for k-center at a chosen halving depth, the epsilon coreset and the
size/radius trade-off table, plus brute-force covering oracles.
"""

import logging
import math
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import KCenterUsageError
from .graph import VisitOrder, build_disk_graph, maximal_independent_set, square
from .metric import MetricSpace, WorkCounter
from .models import CoresetResult, TradeoffRow
from .solvers import check_k, gonzalez, subset_chunks, subset_radii

logger = logging.getLogger(__name__)

TRADEOFF_HEADER = ("R", "size", "cover_radius")

MAX_ORACLE_POINTS = 20


def _max_star_degree(g2, members: Sequence[int]) -> int:
    # Each non-member joins the star of its lowest-index neighboring member.
    n = g2.n
    is_member = np.zeros(n, dtype=bool)
    is_member[list(members)] = True
    star = np.zeros(n, dtype=np.int64)
    for w in np.flatnonzero(~is_member).tolist():
        nbrs = g2.neighbors(w)
        owners = nbrs[is_member[nbrs]]
        if owners.size:
            star[owners[0]] += 1
    return int(star.max()) if n else 0


def dual_clustering(
    space: MetricSpace,
    r: float,
    order: Optional[VisitOrder] = None,
    counter: Optional[WorkCounter] = None,
) -> CoresetResult:
    """Greedy r-net of ``space``.

    Builds the disk graph at threshold r/2, squares it and takes the greedy
    maximal independent set in ``order``. Every point is within two hops of
    r/2 of a member, and members are pairwise farther apart than r/2.

    Args:
        space: Metric space
        r: Covering radius (> 0)
        order: Visit order (index order if None)
        counter: Work counter

    Returns:
        CoresetResult in "by-radius" mode

    Raises:
        KCenterUsageError: If r <= 0
    """
    if not r > 0:
        raise KCenterUsageError(f"Dual clustering radius must be positive, got {r}")
    work = WorkCounter()
    g2 = square(build_disk_graph(space, r / 2.0, work))
    members = maximal_independent_set(g2, order)
    if counter is not None:
        counter.merge(work)
    logger.debug(f"Dual clustering at radius {r}: {len(members)} of {space.n} points")
    return CoresetResult(
        subset=members,
        cover_radius=float(r),
        net_threshold=r / 2.0,
        mode="by-radius",
        requested=float(r),
        max_star_degree=_max_star_degree(g2, members),
        work=work.evaluations,
    )


def coreset_for_k(
    space: MetricSpace,
    k: int,
    R_halvings: int,
    order: Optional[VisitOrder] = None,
    counter: Optional[WorkCounter] = None,
) -> CoresetResult:
    """Coreset for k-center after ``R_halvings`` halvings of the Gonzalez radius.

    When the Gonzalez radius is zero the distinct points it selected are
    returned with cover radius 0.

    Raises:
        KCenterUsageError: If k is out of range or R_halvings is negative
    """
    check_k(space, k)
    if R_halvings < 0:
        raise KCenterUsageError(f"Halving depth must be nonnegative, got {R_halvings}")
    work = WorkCounter()
    solution = gonzalez(space, k, counter=work)

    if solution.radius == 0:
        counts = np.bincount(solution.assignment, minlength=space.n)
        result = CoresetResult(
            subset=solution.centers,
            cover_radius=0.0,
            net_threshold=0.0,
            mode="by-k",
            requested=float(k),
            max_star_degree=int(counts[list(solution.centers)].max()) - 1,
            halvings=R_halvings,
            work=work.evaluations,
        )
    else:
        net = dual_clustering(space, solution.radius / 2.0 ** R_halvings, order, work)
        result = replace(net, mode="by-k", requested=float(k), halvings=R_halvings, work=work.evaluations)

    if counter is not None:
        counter.merge(work)
    return result


def halvings_for_epsilon(epsilon: float) -> int:
    """R = ceil(log2(2 / epsilon)) for epsilon in (0, 2]."""
    if not 0 < epsilon <= 2:
        raise KCenterUsageError(f"epsilon must lie in (0, 2], got {epsilon}")
    return max(0, math.ceil(math.log2(2.0 / epsilon)))


def epsilon_coreset(
    space: MetricSpace,
    k: int,
    epsilon: float,
    order: Optional[VisitOrder] = None,
    counter: Optional[WorkCounter] = None,
) -> CoresetResult:
    """Coreset on which the optimal k-center radius is within (1 + epsilon) of optimal on P.

    Args:
        space: Metric space
        k: Number of centers
        epsilon: Accuracy in (0, 2]
        order: Visit order for the net
        counter: Work counter

    Returns:
        CoresetResult covering every point within epsilon * r / 2 (r the Gonzalez radius)

    Raises:
        KCenterUsageError: If epsilon or k is out of range
    """
    return coreset_for_k(space, k, halvings_for_epsilon(epsilon), order, counter)


def tradeoff_table(
    space: MetricSpace,
    k: int,
    max_R: int,
    order: Optional[VisitOrder] = None,
    counter: Optional[WorkCounter] = None,
    base_radius: Optional[float] = None,
) -> List[TradeoffRow]:
    """Coreset size and cover radius for halving depths 0..max_R.

    Row R covers at base_radius / 2**R, where the base is the Gonzalez
    radius for k unless ``base_radius`` pins it (for instance to the known
    scale of a synthetic construction). Row R + 1 visits the members of
    row R first, so the nets are nested and sizes never decrease. Cover
    radii halve exactly from row to row.

    Raises:
        KCenterUsageError: If k is out of range, max_R is negative or
            base_radius is not positive
    """
    check_k(space, k)
    if max_R < 0:
        raise KCenterUsageError(f"max_R must be nonnegative, got {max_R}")
    if base_radius is not None and not base_radius > 0:
        raise KCenterUsageError(f"Trade-off base radius must be positive, got {base_radius}")
    base = order if order is not None else VisitOrder.index(space.n)
    radius = base_radius if base_radius is not None else gonzalez(space, k, counter=counter).radius

    rows: List[TradeoffRow] = []
    if radius == 0:
        size = len(coreset_for_k(space, k, 0, base).subset)
        return [TradeoffRow(R=R, size=size, cover_radius=0.0) for R in range(max_R + 1)]

    previous: Tuple[int, ...] = ()
    for R in range(max_R + 1):
        visit = VisitOrder.prioritized(previous, base) if previous else base
        net = dual_clustering(space, radius / 2.0 ** R, visit, counter)
        rows.append(TradeoffRow(R=R, size=net.size, cover_radius=net.cover_radius))
        previous = net.subset
        logger.debug(f"Trade-off row R={R}: size {net.size}, cover radius {net.cover_radius}")
    return rows


def covering_radius(
    space: MetricSpace, subset: Sequence[int], counter: Optional[WorkCounter] = None
) -> float:
    """Largest distance from a point to its nearest subset member."""
    subset = list(subset)
    if not subset:
        raise KCenterUsageError("Covering radius of an empty subset is undefined")
    return float(space.pairwise(subset, None, counter).min(axis=0).max())


def minimum_dual_clustering(space: MetricSpace, r: float) -> Tuple[int, ...]:
    """Smallest subset covering every point within r (brute force, n <= 20).

    Among minimum covers the lexicographically smallest is returned.

    Raises:
        KCenterUsageError: If r < 0 or the space exceeds the oracle size
    """
    if r < 0:
        raise KCenterUsageError(f"Radius must be nonnegative, got {r}")
    n = space.n
    if n > MAX_ORACLE_POINTS:
        raise KCenterUsageError(f"Minimum dual clustering oracle supports n <= {MAX_ORACLE_POINTS}, got {n}")
    rows = space.pairwise_matrix()
    for size in range(1, n + 1):
        for combos in subset_chunks(n, size, n):
            hits = np.flatnonzero(subset_radii(rows, combos) <= r)
            if hits.size:
                return tuple(combos[hits[0]].tolist())
    return tuple(range(n))
