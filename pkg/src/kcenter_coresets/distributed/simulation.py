"""
k-center coresets MapReduce simulation.

This module provides a deterministic simulator of machine-local tasks,
aggregation barriers and the round/communication trace they produce.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, TypeVar

import numpy as np
from tqdm import tqdm

from ..exceptions import KCenterUsageError
from ..metric import MetricSpace, WorkCounter
from .partition import Partition

logger = logging.getLogger(__name__)

T = TypeVar("T")

AGGREGATOR = 0


@dataclass
class RoundRecord:
    """One simulated round and the items that crossed task scopes in it."""

    name: str
    items: int


@dataclass
class SimulationTrace:
    """Rounds, communication and memory of one pipeline run."""

    rounds: List[RoundRecord] = field(default_factory=list)
    peak_items_per_machine: List[int] = field(default_factory=list)
    total_work: int = 0

    @property
    def round_count(self) -> int:
        return len(self.rounds)

    @property
    def round_names(self) -> List[str]:
        return [r.name for r in self.rounds]

    @property
    def items_per_round(self) -> List[int]:
        return [r.items for r in self.rounds]

    def items(self, name: str) -> int:
        """Items communicated in the round called ``name``."""
        for r in self.rounds:
            if r.name == name:
                return r.items
        raise KCenterUsageError(f"No round named {name!r} in trace")


@dataclass
class MachineContext:
    """What one machine sees: its global ids, its local space and its counter."""

    index: int
    indices: np.ndarray
    space: MetricSpace
    counter: WorkCounter


class Simulator:
    """Simulated MapReduce cluster over a partitioned metric space.

    Machine-local tasks may run on a thread pool; their results and work
    counters are always merged in ascending machine order, so traces do not
    depend on scheduling. Machine 0 is the aggregator.
    """

    def __init__(
        self,
        space: MetricSpace,
        partition: Partition,
        workers: int = 1,
        progress: bool = False,
    ):
        """Initialize the simulator.

        Args:
            space: Full metric space (read-only, shared)
            partition: Machine sets
            workers: Threads used for machine-local tasks
            progress: Show a progress bar for machine phases
        """
        if workers < 1:
            raise KCenterUsageError(f"workers must be at least 1, got {workers}")
        if partition.n != space.n:
            raise KCenterUsageError(f"Partition covers {partition.n} points, space has {space.n}")
        self.space = space
        self.partition = partition
        self.workers = workers
        self.progress = progress
        self._executor: Optional[ThreadPoolExecutor] = None
        self._rounds: List[RoundRecord] = []
        self._peak = [0] * partition.L
        self._work = WorkCounter()
        self._contexts: Optional[List[Optional[MachineContext]]] = None

    def __enter__(self) -> "Simulator":
        """Context manager entry."""
        if self.workers > 1:
            self._executor = ThreadPoolExecutor(max_workers=self.workers)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        """Context manager exit."""
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    @property
    def L(self) -> int:
        return self.partition.L

    def contexts(self) -> List[Optional[MachineContext]]:
        """Machine contexts in machine order; None for empty machines."""
        if self._contexts is None:
            self._contexts = []
            for machine, indices in enumerate(self.partition.machine_sets):
                if len(indices) == 0:
                    self._contexts.append(None)
                    continue
                self._contexts.append(
                    MachineContext(machine, indices, self.space.subspace(indices), WorkCounter())
                )
                self.hold(machine, len(indices))
        return self._contexts

    def hold(self, machine: int, items: int) -> None:
        """Record that ``machine`` holds ``items`` points at once."""
        self._peak[machine] = max(self._peak[machine], int(items))

    def run_local(self, task: Callable[[MachineContext], T], desc: str = "Machine tasks") -> List[Optional[T]]:
        """Run ``task`` on every non-empty machine.

        Returns:
            Results in machine order (None for empty machines)
        """
        contexts = self.contexts()
        active = [ctx for ctx in contexts if ctx is not None]
        for ctx in active:
            ctx.counter = WorkCounter()

        if self._executor is not None:
            mapped = self._executor.map(task, active)
        else:
            mapped = map(task, active)
        outputs = list(tqdm(mapped, total=len(active), desc=desc, disable=not self.progress))

        results: List[Optional[T]] = [None] * self.L
        for ctx, output in zip(active, outputs):
            results[ctx.index] = output
            self._work.merge(ctx.counter)
        return results

    def run_aggregate(self, task: Callable[[WorkCounter], T]) -> T:
        """Run ``task`` on the aggregator with a fresh work counter."""
        counter = WorkCounter()
        result = task(counter)
        self._work.merge(counter)
        return result

    def close_round(self, name: str, items: int) -> None:
        """Finish a round in which ``items`` points crossed task scopes."""
        self._rounds.append(RoundRecord(name, int(items)))
        logger.debug(f"Round {len(self._rounds)} ({name}): {items} items communicated")

    @property
    def trace(self) -> SimulationTrace:
        return SimulationTrace(
            rounds=list(self._rounds),
            peak_items_per_machine=list(self._peak),
            total_work=self._work.evaluations,
        )


def trace_report(trace: SimulationTrace) -> Dict[str, Any]:
    """JSON summary of a completed simulation."""
    return {
        "rounds": trace.round_count,
        "round_names": trace.round_names,
        "items_per_round": trace.items_per_round,
        "peak_items_per_machine": trace.peak_items_per_machine,
        "total_work": trace.total_work,
    }
