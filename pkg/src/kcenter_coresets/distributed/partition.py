"""
k-center coresets input partitioning.

This module provides the split of a point set into disjoint machine sets.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from ..exceptions import KCenterUsageError
from ..metric import MetricSpace
from ..utils import rng_stream

logger = logging.getLogger(__name__)

PARTITION_STRATEGIES = ("arbitrary", "random")


@dataclass
class Partition:
    """Disjoint machine sets covering 0..n-1, each sorted and of size at most m."""

    machine_sets: List[np.ndarray]
    strategy: str
    m: int
    seed: Optional[int] = None

    @property
    def L(self) -> int:
        return len(self.machine_sets)

    @property
    def n(self) -> int:
        return int(sum(len(s) for s in self.machine_sets))

    def machine_of(self) -> np.ndarray:
        """Machine index per point."""
        owner = np.empty(self.n, dtype=np.int64)
        for machine, indices in enumerate(self.machine_sets):
            owner[indices] = machine
        return owner

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "strategy": self.strategy,
            "L": self.L,
            "m": self.m,
            "sizes": [len(s) for s in self.machine_sets],
        }
        if self.seed is not None:
            record["seed"] = self.seed
        return record


def partition(
    space: MetricSpace,
    L: int,
    strategy: str = "arbitrary",
    m: Optional[int] = None,
    seed: int = 0,
) -> Partition:
    """Split the points of ``space`` across L machines.

    "arbitrary" assigns contiguous index ranges; "random" splits a permutation
    drawn from the ``partition`` PRNG stream of ``seed``. Machine sets differ
    in size by at most one.

    Args:
        space: Metric space to split
        L: Number of machines
        strategy: "arbitrary" or "random"
        m: Per-machine capacity (ceil(n / L) by default)
        seed: Seed of the random strategy

    Returns:
        Partition

    Raises:
        KCenterUsageError: If L < 1, the strategy is unknown or L * m < n
    """
    n = space.n
    if L < 1:
        raise KCenterUsageError(f"Number of machines must be at least 1, got {L}")
    if strategy not in PARTITION_STRATEGIES:
        raise KCenterUsageError(f"Unknown partition strategy {strategy!r}")
    if m is None:
        m = max(1, math.ceil(n / L))
    if m < 1 or L * m < n:
        raise KCenterUsageError(f"Capacity L*m = {L}*{m} cannot hold {n} points")

    if strategy == "arbitrary":
        pieces = np.array_split(np.arange(n, dtype=np.int64), L)
        used_seed = None
    else:
        permutation = rng_stream(seed, "partition").permutation(n).astype(np.int64)
        pieces = [np.sort(piece) for piece in np.array_split(permutation, L)]
        used_seed = seed

    logger.debug(f"Partitioned {n} points over {L} machines ({strategy})")
    return Partition(machine_sets=[np.asarray(p) for p in pieces], strategy=strategy, m=m, seed=used_seed)
