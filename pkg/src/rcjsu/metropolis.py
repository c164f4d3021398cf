"""Inner annealing loop: single-pair swaps under geometric cooling."""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MhParams:
    t0: float = 1500.0
    iters: int = 1000
    gamma: float = 0.5
    # accept when exp(-delta/T) <= rand(), the reversed test that favours
    # large uphill moves; off by default
    literal_acceptance: bool = False
    # measure delta from the incumbent rather than from the candidate
    incumbent_delta: bool = False

    def __post_init__(self):
        if not self.t0 > 0:
            raise ValueError(f"t0 must be positive, got {self.t0}")
        if self.iters < 1:
            raise ValueError(f"iters must be >= 1, got {self.iters}")
        if not 0 < self.gamma < 1:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")


@dataclass
class MhResult:
    incumbent: np.ndarray
    incumbent_cost: float
    best: np.ndarray
    best_cost: float
    proposals: int
    improvements: int
    accepted_worse: int
    temperature: float
    timed_out: bool


def swap_jobs(pi: np.ndarray, rng) -> np.ndarray:
    """Copy of ``pi`` with the jobs at two distinct random positions exchanged."""
    n = len(pi)
    if n < 2:
        raise ValueError("swap needs at least two jobs")
    i = int(rng.integers(n))
    k = int(rng.integers(n - 1))
    if k >= i:
        k += 1
    out = np.array(pi, dtype=np.int64, copy=True)
    out[i], out[k] = out[k], out[i]
    return out


def acceptance_probability(delta: float, temperature: float) -> float:
    if temperature <= 0.0:
        return 0.0
    x = delta / temperature
    return math.exp(-x) if x < 745.0 else 0.0


def metropolis_hastings(
    pi,
    params: MhParams,
    evaluate: Callable[[np.ndarray], float],
    rng: np.random.Generator,
    deadline: Optional[float] = None,
    clock: Callable[[], float] = time.perf_counter,
    cost: Optional[float] = None,
) -> MhResult:
    """Anneal from ``pi`` until ``params.iters`` proposals in a row fail to
    beat the best cost, or ``clock()`` passes ``deadline``.

    The best cost starts at the cost of ``pi`` (pass ``cost`` to skip that
    evaluation).  A strictly better candidate becomes the incumbent and
    resets the stall counter.  Anything else is accepted with probability
    ``exp(-(f(candidate) - best)/T)`` and the temperature is multiplied by
    ``gamma``.
    """
    incumbent = np.array(pi, dtype=np.int64, copy=True)
    inc_cost = evaluate(incumbent) if cost is None else float(cost)
    best, best_cost = incumbent.copy(), inc_cost
    temp = params.t0
    stall = proposals = improvements = worse = 0
    timed_out = False
    trace = log.isEnabledFor(logging.DEBUG)

    while stall < params.iters:
        if deadline is not None and clock() >= deadline:
            timed_out = True
            break
        cand = swap_jobs(incumbent, rng)
        cand_cost = evaluate(cand)
        proposals += 1
        if cand_cost < best_cost:
            best_cost = cand_cost
            best = cand
            incumbent, inc_cost = cand, cand_cost
            stall = 0
            improvements += 1
        else:
            delta = (inc_cost if params.incumbent_delta else cand_cost) - best_cost
            prob = acceptance_probability(delta, temp)
            u = rng.random()
            accept = prob <= u if params.literal_acceptance else u < prob
            if accept:
                incumbent, inc_cost = cand, cand_cost
                worse += 1
            temp *= params.gamma
            stall += 1
        if trace:
            log.debug("mh it=%d T=%.6g C=%.6f", proposals, temp, best_cost)

    return MhResult(incumbent, inc_cost, best, best_cost, proposals, improvements, worse, temp,
                    timed_out)
