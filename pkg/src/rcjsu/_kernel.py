"""Compiled serial schedule generation.

Time is integral.  A job started at ``t`` occupies the integer points
``t .. t+proc-1`` on its machine and in the resource profile.
"""
from __future__ import annotations

import numpy as np
from numba import njit

# slack for summing real-valued resource requirements
RESOURCE_EPS = 1e-9


@njit(cache=True)
def _earliest_start(j, lb, proc, res, cap, busy_row, usage):
    p = proc[j]
    g = res[j]
    t = lb
    while True:
        k = t
        end = t + p
        while k < end:
            if busy_row[k] or usage[k] + g > cap + RESOURCE_EPS:
                break
            k += 1
        if k == end:
            return t
        # jump past the conflicting point
        t = k + 1


@njit(cache=True)
def _place(j, machine, release, proc, res, pred_ptr, pred_idx, cap, busy, usage, starts):
    lb = release[j]
    for q in range(pred_ptr[j], pred_ptr[j + 1]):
        a = pred_idx[q]
        c = starts[a] + proc[a]
        if c > lb:
            lb = c
    m = machine[j]
    t = _earliest_start(j, lb, proc, res, cap, busy[m], usage)
    for k in range(t, t + proc[j]):
        busy[m, k] = True
        usage[k] += res[j]
    starts[j] = t


@njit(cache=True)
def _ready(j, pred_ptr, pred_idx, starts):
    for q in range(pred_ptr[j], pred_ptr[j + 1]):
        if starts[pred_idx[q]] < 0:
            return False
    return True


@njit(cache=True)
def decode_kernel(order, machine, release, proc, res, pred_ptr, pred_idx, n_machines, horizon, cap,
                  starts, placement):
    """Fill ``starts`` and ``placement`` (jobs in the order they were placed).

    Returns the number of jobs placed, which is ``n`` unless the precedence
    relation is cyclic.
    """
    n = order.shape[0]
    busy = np.zeros((n_machines, horizon + 1), dtype=np.bool_)
    usage = np.zeros(horizon + 1, dtype=np.float64)
    waiting = np.empty(n, dtype=np.int64)
    n_wait = 0
    placed = 0
    for i in range(n):
        starts[i] = -1
    for pos in range(n):
        j = order[pos]
        if not _ready(j, pred_ptr, pred_idx, starts):
            waiting[n_wait] = j
            n_wait += 1
            continue
        _place(j, machine, release, proc, res, pred_ptr, pred_idx, cap, busy, usage, starts)
        placement[placed] = j
        placed += 1
        # drain the waiting list to a fixpoint, scanning in insertion order
        progress = True
        while progress and n_wait > 0:
            progress = False
            keep = 0
            for w in range(n_wait):
                job = waiting[w]
                if _ready(job, pred_ptr, pred_idx, starts):
                    _place(job, machine, release, proc, res, pred_ptr, pred_idx, cap, busy,
                           usage, starts)
                    placement[placed] = job
                    placed += 1
                    progress = True
                else:
                    waiting[keep] = job
                    keep += 1
            n_wait = keep
    return placed


@njit(cache=True)
def twt_kernel(starts, proc, due, weight):
    total = 0.0
    for j in range(starts.shape[0]):
        late = starts[j] + proc[j] - due[j]
        if late > 0:
            total += weight[j] * late
    return total


@njit(cache=True)
def evaluate_kernel(order, machine, release, proc, due, weight, res, pred_ptr, pred_idx,
                    n_machines, horizon, caps, out):
    n = order.shape[0]
    starts = np.empty(n, dtype=np.int64)
    placement = np.empty(n, dtype=np.int64)
    for s in range(caps.shape[0]):
        placed = decode_kernel(order, machine, release, proc, res, pred_ptr, pred_idx, n_machines,
                               horizon, caps[s], starts, placement)
        if placed < n:
            out[s] = np.inf
        else:
            out[s] = twt_kernel(starts, proc, due, weight)
