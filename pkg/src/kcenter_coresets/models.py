"""
k-center coresets data models.

This module provides the result records shared by the solvers, coreset,
distributed and CLI modules.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


@dataclass
class ClusteringResult:
    """Represents a k-center solution.

    ``assignment[p]`` is the center point index serving point ``p``; ties go
    to the lowest center index.
    """

    algo: str
    k: int
    centers: Tuple[int, ...]
    assignment: np.ndarray
    radius: float
    seed: Optional[int] = None
    epsilon: Optional[float] = None
    work: int = 0
    wall_time: float = 0.0
    candidate: Optional[float] = None

    @property
    def size(self) -> int:
        return len(self.centers)

    def to_record(self, timing: bool = True, include_assignment: bool = False) -> Dict[str, Any]:
        """Convert the result to its JSON record.

        Args:
            timing: Emit the measured wall time (otherwise 0.0)
            include_assignment: Add the per-point center map

        Returns:
            Dictionary with algo, k, radius, centers, work and wall_time_s
        """
        record: Dict[str, Any] = {
            "algo": self.algo,
            "k": self.k,
            "radius": float(self.radius),
            "centers": [int(c) for c in self.centers],
            "work": int(self.work),
            "wall_time_s": float(self.wall_time) if timing else 0.0,
        }
        if self.epsilon is not None:
            record["epsilon"] = float(self.epsilon)
        if self.seed is not None:
            record["seed"] = int(self.seed)
        if self.candidate is not None:
            record["candidate"] = float(self.candidate)
        if include_assignment:
            record["assignment"] = [int(c) for c in self.assignment]
        return record


@dataclass
class CoresetResult:
    """Represents a coreset or dual clustering.

    Every input point lies within ``cover_radius`` of a subset point, and
    subset points are pairwise farther apart than ``net_threshold``.
    """

    subset: Tuple[int, ...]
    cover_radius: float
    net_threshold: float
    mode: str
    requested: float
    max_star_degree: int = 0
    halvings: Optional[int] = None
    provenance: Optional[Tuple[int, ...]] = None
    work: int = 0

    @property
    def size(self) -> int:
        return len(self.subset)

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "mode": self.mode,
            "requested": float(self.requested),
            "size": self.size,
            "subset": [int(i) for i in self.subset],
            "cover_radius": float(self.cover_radius),
            "net_threshold": float(self.net_threshold),
            "max_star_degree": int(self.max_star_degree),
            "work": int(self.work),
        }
        if self.halvings is not None:
            record["halvings"] = self.halvings
        if self.provenance is not None:
            record["provenance"] = [int(m) for m in self.provenance]
        return record


@dataclass
class TradeoffRow:
    """One halving depth of the size/radius trade-off."""

    R: int
    size: int
    cover_radius: float


@dataclass
class CompareRow:
    """One (k, algo, seed) measurement of the comparison harness."""

    k: int
    algo: str
    seed: int
    radius: float
    work: int = 0
    wall_time: float = 0.0


@dataclass
class CompareReport:
    """Per-seed comparison rows with per-k aggregates."""

    rows: List[CompareRow] = field(default_factory=list)

    CSV_HEADER = ("k", "algo", "mean_radius", "min_radius", "max_radius")

    def sorted_rows(self) -> List[CompareRow]:
        return sorted(self.rows, key=lambda r: (r.k, r.algo, r.seed))

    def summary(self) -> List[Tuple[int, str, float, float, float]]:
        """(k, algo, mean, min, max) radius per group, sorted by (k, algo)."""
        groups: Dict[Tuple[int, str], List[float]] = {}
        for row in self.sorted_rows():
            groups.setdefault((row.k, row.algo), []).append(row.radius)
        return [
            (k, algo, float(np.mean(radii)), float(np.min(radii)), float(np.max(radii)))
            for (k, algo), radii in sorted(groups.items())
        ]

    def ratios(self) -> List[Dict[str, Any]]:
        """Mean radius ratio for every pair of algorithms sharing a k."""
        by_k: Dict[int, Dict[str, float]] = {}
        for k, algo, mean_radius, _, _ in self.summary():
            by_k.setdefault(k, {})[algo] = mean_radius
        ratios = []
        for k, means in sorted(by_k.items()):
            for a, b in combinations(sorted(means), 2):
                ratio = means[a] / means[b] if means[b] > 0 else None
                ratios.append({"k": k, "numerator": a, "denominator": b, "ratio": ratio})
        return ratios

    def to_record(self, timing: bool = True) -> Dict[str, Any]:
        return {
            "rows": [
                {
                    "k": r.k,
                    "algo": r.algo,
                    "seed": r.seed,
                    "radius": float(r.radius),
                    "work": int(r.work),
                    "wall_time_s": float(r.wall_time) if timing else 0.0,
                }
                for r in self.sorted_rows()
            ],
            "summary": [
                {"k": k, "algo": algo, "mean_radius": mu, "min_radius": lo, "max_radius": hi}
                for k, algo, mu, lo, hi in self.summary()
            ],
            "ratios": self.ratios(),
        }
