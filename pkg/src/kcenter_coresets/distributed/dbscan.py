"""
k-center coresets DBSCAN connectivity.

This module provides the reference DBSCAN labeling and the coreset pipeline
that recovers the clusters of core points from per-machine nets.
"""

import logging
import time
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..coreset import dual_clustering
from ..exceptions import KCenterUsageError
from ..graph import build_disk_graph, connected_components
from ..metric import MetricSpace, WorkCounter
from .partition import Partition
from .simulation import MachineContext, SimulationTrace, Simulator

logger = logging.getLogger(__name__)

NOISE = -1

_ROW_BLOCK = 1 << 22


@dataclass
class DbscanCoresetResult:
    """Coreset, component labels and final labels of a DBSCAN pipeline run.

    ``labels`` uses -1 for noise; cluster labels are numbered by the first
    core point (in index order) that carries them.
    """

    coreset: Tuple[int, ...]
    provenance: Tuple[int, ...]
    component_labels: np.ndarray
    labels: np.ndarray
    core: np.ndarray
    eps: float
    minpts: int
    link_factor: float = 2.0
    wall_time: float = 0.0

    @property
    def n_components(self) -> int:
        return int(self.component_labels.max()) + 1 if self.component_labels.size else 0

    def to_record(self, timing: bool = True) -> Dict[str, Any]:
        return {
            "eps": float(self.eps),
            "minpts": self.minpts,
            "link_factor": float(self.link_factor),
            "core_points": int(self.core.sum()),
            "coreset": [int(i) for i in self.coreset],
            "provenance": [int(m) for m in self.provenance],
            "components": self.n_components,
            "labels": [int(v) for v in self.labels],
            "wall_time_s": float(self.wall_time) if timing else 0.0,
        }


def _check(eps: float, minpts: int) -> None:
    if not eps > 0:
        raise KCenterUsageError(f"eps must be positive, got {eps}")
    if minpts < 1:
        raise KCenterUsageError(f"minpts must be at least 1, got {minpts}")


def core_points(
    space: MetricSpace, eps: float, minpts: int, counter: Optional[WorkCounter] = None
) -> np.ndarray:
    """Boolean mask of points with at least ``minpts`` points (itself included) within eps."""
    _check(eps, minpts)
    n = space.n
    counts = np.zeros(n, dtype=np.int64)
    step = max(1, _ROW_BLOCK // max(n, 1))
    for start in range(0, n, step):
        block = np.arange(start, min(n, start + step))
        counts[block] = (space.pairwise(block, None, counter) <= eps).sum(axis=1)
    return counts >= minpts


def canonical_labels(labels: np.ndarray, scan: Optional[np.ndarray] = None) -> np.ndarray:
    """Renumber non-noise labels 0..c-1 by first appearance along ``scan``."""
    labels = np.asarray(labels, dtype=np.int64)
    scan = np.arange(labels.size) if scan is None else scan
    mapping: Dict[int, int] = {}
    for label in labels[scan].tolist():
        if label != NOISE and label not in mapping:
            mapping[label] = len(mapping)
    return np.array([mapping.get(v, NOISE) if v != NOISE else NOISE for v in labels.tolist()], dtype=np.int64)


def reference_dbscan(
    space: MetricSpace, eps: float, minpts: int, counter: Optional[WorkCounter] = None
) -> np.ndarray:
    """Exact DBSCAN labels.

    Clusters are the connected components of the eps disk graph on core
    points. A non-core point takes the label of its nearest core point within
    eps (lowest index on ties) and is noise otherwise.
    """
    core = core_points(space, eps, minpts, counter)
    labels = np.full(space.n, NOISE, dtype=np.int64)
    core_ids = np.flatnonzero(core)
    if core_ids.size == 0:
        return labels
    labels[core_ids] = connected_components(build_disk_graph(space.subspace(core_ids), eps, counter))

    others = np.flatnonzero(~core)
    if others.size:
        rows = space.pairwise(core_ids, others, counter)
        nearest = np.argmin(rows, axis=0)
        within = rows[nearest, np.arange(others.size)] <= eps
        labels[others[within]] = labels[core_ids[nearest[within]]]
    return labels


def dbscan_coreset(
    space: MetricSpace,
    partition: Partition,
    eps: float,
    minpts: int,
    link_factor: float = 2.0,
    workers: int = 1,
    progress: bool = False,
) -> Tuple[DbscanCoresetResult, SimulationTrace]:
    """DBSCAN clusters of core points from composable nets.

    Rounds: core-id (core points over the full space), coreset (each machine
    ships a dual clustering of its core points at radius eps/2), components
    (components of the union's disk graph at link_factor * eps) and
    label-broadcast (labeled union to every machine). Every point takes the
    label of its nearest coreset point, except non-core points farther than
    eps from it, which stay noise.

    Args:
        space: Metric space
        partition: Machine sets
        eps: DBSCAN radius
        minpts: Core threshold
        link_factor: Union linking threshold as a multiple of eps
        workers: Threads for machine-local tasks
        progress: Show progress bars

    Returns:
        (DbscanCoresetResult, SimulationTrace); with no core points every
        label is noise and there are no components

    Raises:
        KCenterUsageError: If eps <= 0, minpts < 1 or link_factor <= 0
    """
    _check(eps, minpts)
    if not link_factor > 0:
        raise KCenterUsageError(f"link_factor must be positive, got {link_factor}")
    began = time.perf_counter()

    with Simulator(space, partition, workers=workers, progress=progress) as sim:
        core = sim.run_aggregate(lambda counter: core_points(space, eps, minpts, counter))
        sim.close_round("core-id", 0)

        def local(ctx: MachineContext) -> np.ndarray:
            mine = np.flatnonzero(core[ctx.indices])
            if mine.size == 0:
                return np.zeros(0, dtype=np.int64)
            net = dual_clustering(ctx.space.subspace(mine), eps / 2.0, counter=ctx.counter)
            return ctx.indices[mine[list(net.subset)]]

        pieces = sim.run_local(local, desc="Core coresets")
        ids, owners = [], []
        for machine, piece in enumerate(pieces):
            if piece is not None and piece.size:
                ids.append(piece)
                owners.append(np.full(piece.size, machine, dtype=np.int64))
        union = np.concatenate(ids) if ids else np.zeros(0, dtype=np.int64)
        provenance = np.concatenate(owners) if owners else np.zeros(0, dtype=np.int64)
        order = np.argsort(union, kind="stable")
        union, provenance = union[order], provenance[order]
        sim.close_round("coreset", union.size)
        sim.hold(0, union.size)

        def link(counter: WorkCounter) -> np.ndarray:
            if union.size == 0:
                return np.zeros(0, dtype=np.int64)
            return connected_components(build_disk_graph(space.subspace(union), link_factor * eps, counter))

        components = sim.run_aggregate(link)
        sim.close_round("components", 0)

        def label(ctx: MachineContext) -> np.ndarray:
            sim.hold(ctx.index, len(ctx.indices) + union.size)
            result = np.full(len(ctx.indices), NOISE, dtype=np.int64)
            if union.size == 0:
                return result
            rows = sim.space.pairwise(union, ctx.indices, ctx.counter)
            nearest = np.argmin(rows, axis=0)
            distance = rows[nearest, np.arange(rows.shape[1])]
            is_core = core[ctx.indices]
            # Non-core points join the cluster of a coreset point within eps, else stay noise.
            keep = is_core | (distance <= eps)
            result[keep] = components[nearest[keep]]
            return result

        outputs = sim.run_local(label, desc="Label broadcast")
        labels = np.full(space.n, NOISE, dtype=np.int64)
        for ctx, output in zip(sim.contexts(), outputs):
            if ctx is not None:
                labels[ctx.indices] = output
        sim.close_round("label-broadcast", union.size * sim.L)
        trace = sim.trace

    # Number clusters by their first core point so results compare with reference_dbscan.
    core_ids = np.flatnonzero(core)
    scan = np.concatenate([core_ids, np.flatnonzero(~core)])
    canonical = canonical_labels(labels, scan)
    mapping = {int(old): int(new) for old, new in zip(labels.tolist(), canonical.tolist()) if old != NOISE}
    component_labels = np.array([mapping.get(int(c), NOISE) for c in components.tolist()], dtype=np.int64)

    result = DbscanCoresetResult(
        coreset=tuple(union.tolist()),
        provenance=tuple(provenance.tolist()),
        component_labels=component_labels,
        labels=canonical,
        core=core,
        eps=eps,
        minpts=minpts,
        link_factor=link_factor,
        wall_time=time.perf_counter() - began,
    )
    logger.info(f"DBSCAN coreset: {union.size} coreset points, {result.n_components} components")
    return result, trace
