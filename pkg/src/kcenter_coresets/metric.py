"""
k-center coresets metric spaces.

This module provides point storage, distance evaluation with exact work
accounting, and validation of explicit distance matrices.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import KCenterUsageError

logger = logging.getLogger(__name__)

IndexArray = Union[Sequence[int], np.ndarray]

# Upper bound on the number of float64 temporaries held by one Euclidean block.
_BLOCK_BUDGET = 1 << 22


@dataclass
class WorkCounter:
    """Counts the distance evaluations performed by one task."""

    evaluations: int = 0

    def add(self, count: int) -> None:
        """Record ``count`` distance evaluations."""
        self.evaluations += int(count)

    def merge(self, other: "WorkCounter") -> "WorkCounter":
        """Fold another task's counter into this one.

        Args:
            other: Counter of a finished task

        Returns:
            This counter
        """
        self.evaluations += other.evaluations
        return self


class PointSet:
    """Immutable collection of finite coordinate vectors.

    Point ids are the implicit 0-based row indices. A flat sequence of numbers
    is read as one-dimensional points.
    """

    def __init__(self, coordinates: Any):
        array = np.array(coordinates, dtype=np.float64)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        if array.ndim != 2 or array.shape[1] < 1:
            raise KCenterUsageError(
                f"Point coordinates must form an (n, dim) table, got shape {array.shape}"
            )
        if not np.all(np.isfinite(array)):
            raise KCenterUsageError("Point coordinates must be finite (no NaN or infinity)")
        array.setflags(write=False)
        self._coordinates = array

    @property
    def coordinates(self) -> np.ndarray:
        """Read-only (n, dim) coordinate array."""
        return self._coordinates

    @property
    def n(self) -> int:
        return self._coordinates.shape[0]

    @property
    def dim(self) -> int:
        return self._coordinates.shape[1]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, index: int) -> np.ndarray:
        return self._coordinates[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return np.array_equal(self._coordinates, other._coordinates)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PointSet(n={self.n}, dim={self.dim})"


class MetricSpace:
    """A finite metric space: Euclidean points or an explicit distance matrix.

    The space is immutable after construction and may be read by many tasks at
    once. Work accounting is done through the ``counter`` argument each
    distance method accepts, so concurrent tasks never share a counter.
    """

    def __init__(
        self,
        points: Optional[PointSet] = None,
        matrix: Optional[Any] = None,
        doubling_dim_hint: Optional[float] = None,
    ):
        """Initialize the metric space.

        Args:
            points: Point set measured with the Euclidean distance
            matrix: Explicit square distance matrix
            doubling_dim_hint: User-supplied doubling dimension b (never estimated)

        Raises:
            KCenterUsageError: If both or neither sources are given, or the matrix is malformed
        """
        if (points is None) == (matrix is None):
            raise KCenterUsageError("Exactly one of points or matrix must be given")
        if doubling_dim_hint is not None and doubling_dim_hint < 0:
            raise KCenterUsageError(f"Doubling dimension hint must be nonnegative, got {doubling_dim_hint}")

        self._points: Optional[PointSet] = points
        self._matrix: Optional[np.ndarray] = None
        if matrix is not None:
            array = np.array(matrix, dtype=np.float64)
            if array.ndim != 2 or array.shape[0] != array.shape[1]:
                raise KCenterUsageError(f"Distance matrix must be square, got shape {array.shape}")
            if not np.all(np.isfinite(array)):
                raise KCenterUsageError("Distance matrix entries must be finite")
            array.setflags(write=False)
            self._matrix = array
        self.doubling_dim_hint = doubling_dim_hint

    @classmethod
    def euclidean(cls, points: Any, doubling_dim_hint: Optional[float] = None) -> "MetricSpace":
        """Create a Euclidean space from a PointSet or coordinate table."""
        if not isinstance(points, PointSet):
            points = PointSet(points)
        return cls(points=points, doubling_dim_hint=doubling_dim_hint)

    @classmethod
    def from_matrix(cls, matrix: Any, doubling_dim_hint: Optional[float] = None) -> "MetricSpace":
        """Create a space from an explicit distance matrix (not validated here)."""
        return cls(matrix=matrix, doubling_dim_hint=doubling_dim_hint)

    @property
    def n(self) -> int:
        if self._points is not None:
            return self._points.n
        return self._matrix.shape[0]

    def __len__(self) -> int:
        return self.n

    @property
    def is_euclidean(self) -> bool:
        return self._points is not None

    @property
    def points(self) -> Optional[PointSet]:
        return self._points

    @property
    def matrix(self) -> Optional[np.ndarray]:
        return self._matrix

    @property
    def doubling_constant(self) -> Optional[float]:
        """D = 2^b when a doubling dimension hint was supplied."""
        if self.doubling_dim_hint is None:
            return None
        return float(2.0 ** self.doubling_dim_hint)

    def _indices(self, indices: Optional[IndexArray]) -> np.ndarray:
        if indices is None:
            return np.arange(self.n)
        array = np.asarray(indices, dtype=np.int64).reshape(-1)
        if array.size and (array.min() < 0 or array.max() >= self.n):
            raise KCenterUsageError(f"Point index out of range for a space of {self.n} points")
        return array

    def _euclidean_block(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        coordinates = self._points.coordinates
        diff = coordinates[rows][:, None, :] - coordinates[cols][None, :, :]
        return np.sqrt(np.sum(diff * diff, axis=-1))

    def pairwise(
        self,
        rows: Optional[IndexArray] = None,
        cols: Optional[IndexArray] = None,
        counter: Optional[WorkCounter] = None,
    ) -> np.ndarray:
        """Distances between every row point and every column point.

        Args:
            rows: Row point indices (all points if None)
            cols: Column point indices (all points if None)
            counter: Work counter charged len(rows) * len(cols) evaluations

        Returns:
            (len(rows), len(cols)) distance array

        Raises:
            KCenterUsageError: If an index is out of range
        """
        rows = self._indices(rows)
        cols = self._indices(cols)
        if counter is not None:
            counter.add(rows.size * cols.size)

        if self._matrix is not None:
            return self._matrix[np.ix_(rows, cols)]

        result = np.empty((rows.size, cols.size), dtype=np.float64)
        if rows.size == 0 or cols.size == 0:
            return result
        step = max(1, _BLOCK_BUDGET // (cols.size * self._points.dim))
        for start in range(0, rows.size, step):
            block = rows[start:start + step]
            result[start:start + block.size] = self._euclidean_block(block, cols)
        return result

    def distances_from(
        self,
        i: int,
        indices: Optional[IndexArray] = None,
        counter: Optional[WorkCounter] = None,
    ) -> np.ndarray:
        """Distances from point ``i`` to ``indices`` (all points if None)."""
        return self.pairwise([i], indices, counter)[0]

    def distance(self, i: int, j: int, counter: Optional[WorkCounter] = None) -> float:
        """Distance between points ``i`` and ``j``.

        Raises:
            KCenterUsageError: If an index is out of range
        """
        return float(self.pairwise([i], [j], counter)[0, 0])

    def pairwise_matrix(self, counter: Optional[WorkCounter] = None) -> np.ndarray:
        """The full n x n distance matrix (n * n evaluations)."""
        return self.pairwise(None, None, counter)

    def subspace(self, indices: IndexArray) -> "MetricSpace":
        """The metric space restricted to ``indices``, renumbered 0..len-1."""
        idx = self._indices(indices)
        if self._points is not None:
            return MetricSpace(
                points=PointSet(self._points.coordinates[idx]),
                doubling_dim_hint=self.doubling_dim_hint,
            )
        return MetricSpace(
            matrix=self._matrix[np.ix_(idx, idx)],
            doubling_dim_hint=self.doubling_dim_hint,
        )

    def __repr__(self) -> str:
        source = "euclidean" if self.is_euclidean else "matrix"
        return f"MetricSpace(n={self.n}, source={source}, doubling_dim_hint={self.doubling_dim_hint})"


@dataclass
class MetricViolation:
    """One violated metric axiom with its witness indices."""

    axiom: str
    witness: Tuple[int, ...]
    detail: str


@dataclass
class MetricReport:
    """Outcome of validate_metric. An empty violation list means valid."""

    checked: bool
    message: str
    violations: List[MetricViolation] = field(default_factory=list)
    violation_count: int = 0

    @property
    def valid(self) -> bool:
        return self.violation_count == 0

    def to_record(self) -> Dict[str, Any]:
        return {
            "valid": self.valid,
            "checked": self.checked,
            "message": self.message,
            "violation_count": self.violation_count,
            "violations": [
                {"axiom": v.axiom, "witness": list(v.witness), "detail": v.detail}
                for v in self.violations
            ],
        }


def _fmt(value: float) -> str:
    return f"{value:g}"


def validate_metric(
    space: MetricSpace,
    limit: Optional[int] = 200,
    max_witnesses: int = 10,
) -> MetricReport:
    """Check the metric axioms of an explicit distance matrix.

    Euclidean spaces are assumed valid. Matrices above ``limit`` points are
    skipped unless ``limit`` is None, since the triangle check is O(n^3).

    Args:
        space: Space to validate
        limit: Largest matrix checked exhaustively (None forces the check)
        max_witnesses: Witnesses kept per axiom

    Returns:
        MetricReport listing violated axioms with witness tuples
    """
    if space.is_euclidean:
        return MetricReport(checked=False, message="assumed valid, skipped")
    n = space.n
    if limit is not None and n > limit:
        return MetricReport(
            checked=False,
            message=f"skipped: {n} points exceeds the exhaustive limit of {limit}",
        )

    d = space.matrix
    report = MetricReport(checked=True, message="")

    def collect(axiom: str, witnesses: np.ndarray, detail) -> None:
        report.violation_count += len(witnesses)
        for witness in witnesses[:max_witnesses]:
            witness = tuple(int(x) for x in witness)
            report.violations.append(MetricViolation(axiom, witness, detail(*witness)))

    collect(
        "identity",
        np.argwhere(np.diag(d) != 0.0),
        lambda i: f"d({i},{i}) = {_fmt(d[i, i])}",
    )
    collect(
        "non-negativity",
        np.argwhere(d < 0.0),
        lambda i, j: f"d({i},{j}) = {_fmt(d[i, j])} < 0",
    )
    collect(
        "symmetry",
        np.argwhere(np.triu(d != d.T, k=1)),
        lambda i, j: f"d({i},{j}) = {_fmt(d[i, j])} != {_fmt(d[j, i])} = d({j},{i})",
    )

    # Witness (i, j, k) means d(i,j) + d(j,k) < d(i,k); kept in lexicographic order.
    triangle: List[Tuple[int, int, int]] = []
    triangle_count = 0
    for j in range(n):
        bad = np.argwhere(d[:, j][:, None] + d[j, :][None, :] < d)
        triangle_count += len(bad)
        triangle.extend((int(i), j, int(k)) for i, k in bad[:max_witnesses])
    triangle.sort()
    report.violation_count += triangle_count
    for i, j, k in triangle[:max_witnesses]:
        report.violations.append(
            MetricViolation(
                "triangle",
                (i, j, k),
                f"{_fmt(d[i, j])}+{_fmt(d[j, k])} < {_fmt(d[i, k])}",
            )
        )

    report.message = "valid" if report.valid else f"{report.violation_count} axiom violations"
    if not report.valid:
        logger.debug(f"Metric validation found {report.violation_count} violations")
    return report
