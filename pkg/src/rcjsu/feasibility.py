"""Schedule feasibility checking, deliberately independent of the decoder.

Works from plain Python ints and floats: pairwise interval tests for
machines, a per-time-point resource sum, and direct precedence checks.
"""
from __future__ import annotations

from typing import Sequence

from .instance import Instance


def schedule_violations(inst: Instance, starts: Sequence[int], capacity: float,
                        tol: float = 1e-9) -> list[str]:
    starts = [int(s) for s in starts]
    jobs = inst.jobs
    out = []
    if len(starts) != len(jobs):
        return [f"expected {len(jobs)} start times, got {len(starts)}"]
    for job, s in zip(jobs, starts):
        if s < job.release:
            out.append(f"job {job.id} starts at {s} before release {job.release}")
    for a, b in inst.precedences:
        if starts[b] < starts[a] + jobs[a].proc:
            out.append(f"job {b} starts at {starts[b]} before predecessor {a} completes")
    for i in range(len(jobs)):
        for k in range(i + 1, len(jobs)):
            if jobs[i].machine != jobs[k].machine:
                continue
            if starts[i] < starts[k] + jobs[k].proc and starts[k] < starts[i] + jobs[i].proc:
                out.append(f"jobs {i} and {k} overlap on machine {jobs[i].machine}")
    end = max((s + j.proc for s, j in zip(starts, jobs)), default=0)
    for t in range(min(starts, default=0), end):
        load = sum(j.resource for s, j in zip(starts, jobs) if s <= t < s + j.proc)
        if load > capacity + tol:
            out.append(f"resource {load} exceeds capacity {capacity} at t={t}")
    return out


def is_feasible(inst: Instance, starts: Sequence[int], capacity: float) -> bool:
    return not schedule_violations(inst, starts, capacity)
