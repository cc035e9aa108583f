"""
k-center coresets graph primitives.

This module provides threshold (disk) graphs over point indices together with
graph squaring, greedy maximal independent sets and connected components.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .exceptions import KCenterUsageError
from .metric import MetricSpace, WorkCounter
from .utils import rng_stream

logger = logging.getLogger(__name__)

# Rows per block when scanning pairs, as a number of float64 entries.
_PAIR_BLOCK = 1 << 22


@dataclass(frozen=True, eq=False)
class VisitOrder:
    """A permutation of vertex indices driving greedy scans."""

    permutation: np.ndarray
    provenance: str = "index"
    seed: Optional[int] = None

    def __post_init__(self):
        perm = np.asarray(self.permutation, dtype=np.int64).reshape(-1)
        if not np.array_equal(np.sort(perm), np.arange(perm.size)):
            raise KCenterUsageError("Visit order must be a permutation of 0..n-1")
        perm.setflags(write=False)
        object.__setattr__(self, "permutation", perm)

    def __len__(self) -> int:
        return self.permutation.size

    def __iter__(self):
        return iter(self.permutation.tolist())

    @classmethod
    def index(cls, n: int) -> "VisitOrder":
        return cls(np.arange(n), "index")

    @classmethod
    def seeded(cls, n: int, seed: int) -> "VisitOrder":
        """A seeded-random order drawn from the ``order`` PRNG stream."""
        return cls(rng_stream(seed, "order").permutation(n), "seeded-random", seed)

    @classmethod
    def farthest_first(
        cls, space: MetricSpace, start: int = 0, counter: Optional[WorkCounter] = None
    ) -> "VisitOrder":
        """The complete farthest-first traversal of ``space`` from ``start``.

        Ties go to the lowest index. Costs n * n distance evaluations.
        """
        n = space.n
        nearest = space.distances_from(start, None, counter).copy()
        visited = np.zeros(n, dtype=bool)
        visited[start] = True
        order = [start]
        for _ in range(n - 1):
            candidates = np.where(visited, -np.inf, nearest)
            nxt = int(np.argmax(candidates))
            visited[nxt] = True
            order.append(nxt)
            np.minimum(nearest, space.distances_from(nxt, None, counter), out=nearest)
        return cls(np.array(order), "farthest-first")

    @classmethod
    def prioritized(cls, first: Sequence[int], rest: "VisitOrder") -> "VisitOrder":
        """Visit ``first`` (in its given order), then the rest in ``rest``'s order."""
        first = [int(v) for v in first]
        seen = np.zeros(len(rest), dtype=bool)
        seen[first] = True
        tail = [v for v in rest.permutation.tolist() if not seen[v]]
        return cls(np.array(first + tail, dtype=np.int64), "nested", rest.seed)


class Graph:
    """Undirected simple graph on vertices 0..n-1 backed by a CSR matrix.

    Adjacency is symmetric, has no self-loops and stores sorted neighbor lists.
    """

    def __init__(self, adjacency: sparse.spmatrix):
        coo = sparse.coo_matrix(adjacency)
        if coo.shape[0] != coo.shape[1]:
            raise KCenterUsageError(f"Adjacency must be square, got shape {coo.shape}")
        n = coo.shape[0]
        keep = (coo.row != coo.col) & (coo.data != 0)
        rows, cols = coo.row[keep], coo.col[keep]
        data = np.ones(2 * rows.size, dtype=np.int8)
        sym = sparse.csr_matrix(
            (data, (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
            shape=(n, n),
        )
        sym.sum_duplicates()
        sym.data[:] = 1
        sym = sym.astype(bool)
        sym.sort_indices()
        self._adjacency = sym

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        """Build a graph from (u, v) pairs."""
        pairs = np.array(list(edges), dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise KCenterUsageError(f"Edge endpoint out of range for {n} vertices")
        data = np.ones(pairs.shape[0], dtype=np.int8)
        return cls(sparse.coo_matrix((data, (pairs[:, 0], pairs[:, 1])), shape=(n, n)))

    @property
    def n(self) -> int:
        return self._adjacency.shape[0]

    @property
    def adjacency(self) -> sparse.csr_matrix:
        return self._adjacency

    @property
    def edge_count(self) -> int:
        return self._adjacency.nnz // 2

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor indices of ``v``."""
        indptr = self._adjacency.indptr
        return self._adjacency.indices[indptr[v]:indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self._adjacency.indptr[v + 1] - self._adjacency.indptr[v])

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        pos = np.searchsorted(nbrs, v)
        return bool(pos < nbrs.size and nbrs[pos] == v)

    def edges(self) -> List[Tuple[int, int]]:
        """All edges as (u, v) with u < v, in lexicographic order."""
        upper = sparse.triu(self._adjacency, k=1).tocsr()
        upper.sort_indices()
        rows = np.repeat(np.arange(self.n), np.diff(upper.indptr))
        return list(zip(rows.tolist(), upper.indices.tolist()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, edges={self.edge_count})"


class DiskGraph(Graph):
    """Threshold graph: (i, j) adjacent iff d(i, j) <= radius."""

    edge_rule = "<= radius"

    def __init__(self, adjacency: sparse.spmatrix, radius: float):
        super().__init__(adjacency)
        self.radius = float(radius)

    def __repr__(self) -> str:
        return f"DiskGraph(n={self.n}, radius={self.radius}, edges={self.edge_count})"


def _check_threshold(threshold: float) -> None:
    if not threshold >= 0:
        raise KCenterUsageError(f"Disk graph threshold must be nonnegative, got {threshold}")


def build_disk_graph(
    space: MetricSpace, threshold: float, counter: Optional[WorkCounter] = None
) -> DiskGraph:
    """Build the exact threshold graph of ``space``.

    Ties are edges: pairs with distance exactly ``threshold`` are adjacent.
    Costs n * n distance evaluations.

    Args:
        space: Metric space
        threshold: Edge threshold
        counter: Work counter

    Returns:
        DiskGraph at ``threshold``

    Raises:
        KCenterUsageError: If the threshold is negative
    """
    _check_threshold(threshold)
    n = space.n
    step = max(1, _PAIR_BLOCK // max(n, 1))
    rows: List[np.ndarray] = []
    cols: List[np.ndarray] = []
    for start in range(0, n, step):
        block = np.arange(start, min(n, start + step))
        r, c = np.nonzero(space.pairwise(block, None, counter) <= threshold)
        rows.append(r + start)
        cols.append(c)
    rows_all = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cols_all = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    data = np.ones(rows_all.size, dtype=np.int8)
    graph = DiskGraph(sparse.coo_matrix((data, (rows_all, cols_all)), shape=(n, n)), threshold)
    logger.debug(f"Built {graph}")
    return graph


def disk_graph_from_matrix(matrix: np.ndarray, threshold: float) -> DiskGraph:
    """Threshold graph over an already computed distance matrix."""
    _check_threshold(threshold)
    rows, cols = np.nonzero(matrix <= threshold)
    data = np.ones(rows.size, dtype=np.int8)
    n = matrix.shape[0]
    return DiskGraph(sparse.coo_matrix((data, (rows, cols)), shape=(n, n)), threshold)


def square(g: Graph) -> Graph:
    """The square of ``g``: u, v adjacent iff adjacent in g or sharing a neighbor."""
    a = g.adjacency.astype(np.int32)
    return Graph(a + a @ a)


def maximal_independent_set(g: Graph, order: Optional[VisitOrder] = None) -> Tuple[int, ...]:
    """Greedy maximal independent set.

    Scan vertices in ``order`` and take a vertex iff no earlier-taken vertex
    is adjacent to it.

    Args:
        g: Graph
        order: Visit order (index order if None)

    Returns:
        Sorted tuple of member vertices

    Raises:
        KCenterUsageError: If the order does not match the graph size
    """
    n = g.n
    if order is None:
        order = VisitOrder.index(n)
    if len(order) != n:
        raise KCenterUsageError(f"Visit order has {len(order)} vertices, graph has {n}")
    taken = np.zeros(n, dtype=bool)
    blocked = np.zeros(n, dtype=bool)
    for v in order.permutation.tolist():
        if blocked[v]:
            continue
        taken[v] = True
        blocked[v] = True
        blocked[g.neighbors(v)] = True
    return tuple(np.flatnonzero(taken).tolist())


def is_independent_set(g: Graph, vertices: Iterable[int]) -> bool:
    members = np.zeros(g.n, dtype=bool)
    members[list(vertices)] = True
    return not any(members[g.neighbors(v)].any() for v in np.flatnonzero(members))


def is_maximal_independent_set(g: Graph, vertices: Iterable[int]) -> bool:
    """True iff ``vertices`` is independent and every other vertex has a neighbor in it."""
    vertices = list(vertices)
    if not is_independent_set(g, vertices):
        return False
    members = np.zeros(g.n, dtype=bool)
    members[vertices] = True
    dominated = members.copy()
    for v in vertices:
        dominated[g.neighbors(v)] = True
    return bool(dominated.all())


def connected_components(g: Graph) -> np.ndarray:
    """Component label per vertex.

    Labels are 0..c-1 numbered by the lowest vertex of each component.
    """
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    _, labels = csgraph.connected_components(g.adjacency, directed=False)
    _, first = np.unique(labels, return_index=True)
    relabel = np.empty(first.size, dtype=np.int64)
    relabel[np.argsort(first)] = np.arange(first.size)
    return relabel[labels]


def dump_edge_list(g: Graph, stream: Optional[TextIO] = None) -> str:
    """Edge list text, one "u v" line per edge with u < v."""
    text = "".join(f"{u} {v}\n" for u, v in g.edges())
    if stream is not None:
        stream.write(text)
    return text
