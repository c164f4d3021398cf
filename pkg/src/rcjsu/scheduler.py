"""Permutation decoding and the multi-sample weighted tardiness objective."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernel
from .instance import Instance, InstanceError, UncertaintyScenario, u_min


@dataclass(frozen=True)
class Schedule:
    """Start time of every job for one sample capacity.

    ``placement`` lists jobs in the order the decoder placed them; it differs
    from the permutation whenever jobs had to wait for a predecessor.
    """

    starts: np.ndarray
    capacity: float
    placement: np.ndarray

    def completion(self, inst: Instance) -> np.ndarray:
        return self.starts + inst.arrays.proc


@dataclass(frozen=True)
class ObjectiveValue:
    mean_twt: float
    per_sample: tuple[float, ...]


def horizon(inst: Instance) -> int:
    """Upper bound on any serial schedule's makespan: sum of processing times
    plus the latest release."""
    a = inst.arrays
    return int(a.proc.sum() + (a.release.max() if inst.n else 0))


def as_permutation(pi: Sequence[int], n: int) -> np.ndarray:
    order = np.asarray(pi, dtype=np.int64)
    if order.shape != (n,) or not np.array_equal(np.sort(order), np.arange(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {list(order)}")
    return order


def _check_capacity(inst: Instance, capacity: float):
    if capacity + _kernel.RESOURCE_EPS < u_min(inst):
        raise InstanceError(f"capacity {capacity} is below the largest job requirement {u_min(inst)}")


def decode(inst: Instance, capacity: float, pi: Sequence[int]) -> Schedule:
    """Serial schedule generation.

    Jobs are taken in permutation order.  A job with an unplaced predecessor
    goes on a waiting list; otherwise it is placed at the earliest integer
    start respecting release, predecessor completion, machine exclusivity and
    the resource limit.  After each placement the waiting list is rescanned
    in insertion order until nothing more can be released.
    """
    _check_capacity(inst, capacity)
    order = as_permutation(pi, inst.n)
    a = inst.arrays
    starts = np.empty(inst.n, dtype=np.int64)
    placement = np.empty(inst.n, dtype=np.int64)
    placed = _kernel.decode_kernel(
        order, a.machine, a.release, a.proc, a.resource, a.pred_ptr, a.pred_idx,
        inst.machines, horizon(inst), float(capacity), starts, placement,
    )
    if placed < inst.n:
        raise InstanceError("precedence cycle: some jobs can never be released")
    return Schedule(starts, float(capacity), placement)


def twt(inst: Instance, sched: Schedule) -> float:
    a = inst.arrays
    late = (sched.starts + a.proc - a.due).tolist()
    total = 0.0
    # job order summation, matching the compiled evaluator bit for bit
    for w, d in zip(a.weight.tolist(), late):
        if d > 0:
            total += w * d
    return total


def evaluate(inst: Instance, scen: UncertaintyScenario, pi: Sequence[int]) -> ObjectiveValue:
    per_sample = tuple(twt(inst, decode(inst, c, pi)) for c in scen.capacities)
    return ObjectiveValue(float(np.mean(per_sample)), per_sample)


class Evaluator:
    """Callable objective ``pi -> mean TWT`` bound to one instance and scenario.

    Skips the Python-level schedule objects and counts evaluations, which the
    solvers use as a deterministic clock.
    """

    def __init__(self, inst: Instance, scen: UncertaintyScenario):
        for c in scen.capacities:
            _check_capacity(inst, c)
        self.inst = inst
        self.scen = scen
        self.calls = 0
        a = inst.arrays
        self._args = (a.machine, a.release, a.proc, a.due, a.weight, a.resource,
                      a.pred_ptr, a.pred_idx, inst.machines, horizon(inst), scen.capacity_array)
        self._out = np.empty(scen.samples, dtype=np.float64)

    def per_sample(self, pi) -> np.ndarray:
        self.calls += 1
        order = np.asarray(pi, dtype=np.int64)
        _kernel.evaluate_kernel(order, *self._args, self._out)
        return self._out.copy()

    def __call__(self, pi) -> float:
        self.calls += 1
        order = np.asarray(pi, dtype=np.int64)
        _kernel.evaluate_kernel(order, *self._args, self._out)
        return float(self._out.mean())

    def value(self, pi) -> ObjectiveValue:
        per = self.per_sample(pi)
        return ObjectiveValue(float(per.mean()), tuple(per.tolist()))


def format_schedules(inst: Instance, scen: UncertaintyScenario, pi: Sequence[int]) -> str:
    """Debug dump, one ``JOB <id> SAMPLE <s> START <t>`` line per job and sample."""
    lines = []
    for s, cap in enumerate(scen.capacities):
        sched = decode(inst, cap, pi)
        lines += [f"JOB {j} SAMPLE {s} START {int(t)}" for j, t in enumerate(sched.starts)]
    return "\n".join(lines) + "\n"
