"""Adaptive population-based simulated annealing.

Each population member is annealed in turn, the global best is updated, and
the member is then perturbed by one of three moves chosen with adaptive
probabilities.  Choosing a move multiplies its probability by ``rho`` before
the triple is renormalised, so heavily used moves become less likely.  A
final first-improvement pair-swap descent polishes the global best.
"""
from __future__ import annotations

import csv
import enum
import io
import logging
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .instance import Instance, UncertaintyScenario
from .metropolis import MhParams, metropolis_hastings, swap_jobs
from .scheduler import Evaluator, ObjectiveValue

log = logging.getLogger(__name__)


class Operator(enum.Enum):
    BETA = "beta"
    SWAP = "swap"
    RESTART = "restart"


@dataclass(frozen=True)
class OperatorProbs:
    p_b: float = 0.65
    p_j: float = 0.3
    p_r: float = 0.05

    def __post_init__(self):
        vals = self.as_tuple()
        if any(not 0.0 <= v <= 1.0 for v in vals) or abs(sum(vals) - 1.0) > 1e-12:
            raise ValueError(f"operator probabilities must lie on the simplex, got {vals}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_b, self.p_j, self.p_r)

    def __getitem__(self, op: Operator) -> float:
        return {Operator.BETA: self.p_b, Operator.SWAP: self.p_j, Operator.RESTART: self.p_r}[op]


INITIAL_PROBS = OperatorProbs(0.65, 0.3, 0.05)


@dataclass(frozen=True)
class ApsaParams:
    pop_size: int = 10
    time_limit: float = 600.0
    rho: float = 0.9
    mh: MhParams = field(default_factory=MhParams)
    beta_len: int = 5
    seed: int = 0
    initial_probs: OperatorProbs = INITIAL_PROBS
    # measure time in evaluations / eval_rate instead of wall-clock seconds;
    # makes runs reproducible bit for bit
    eval_rate: Optional[float] = None
    # budget for the final pair-swap descent; None runs it to a local optimum
    polish_time_limit: Optional[float] = None

    def __post_init__(self):
        if self.pop_size < 1:
            raise ValueError(f"pop_size must be >= 1, got {self.pop_size}")
        if not 0 < self.rho <= 1:
            raise ValueError(f"rho must lie in (0, 1], got {self.rho}")
        if self.beta_len < 1:
            raise ValueError(f"beta_len must be >= 1, got {self.beta_len}")
        if self.time_limit < 0:
            raise ValueError("time_limit must be nonnegative")
        if self.eval_rate is not None and not self.eval_rate > 0:
            raise ValueError("eval_rate must be positive")


@dataclass(frozen=True)
class TracePoint:
    elapsed: float
    best: float
    probs: OperatorProbs
    evaluations: int


@dataclass
class ApsaResult:
    best_pi: np.ndarray
    best_value: ObjectiveValue
    history: list[TracePoint]
    operator_counts: dict[Operator, int]
    prob_trace: list[OperatorProbs]
    elapsed: float
    evaluations: int
    generations: int
    mh_runs: int
    pre_polish_value: float

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["elapsed_s", "best_mean_twt", "p_b", "p_j", "p_r"])
        for pt in self.history:
            w.writerow([repr(pt.elapsed), repr(pt.best), *map(repr, pt.probs.as_tuple())])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# moves


def random_list(n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one job")
    return rng.permutation(n).astype(np.int64)


def init_population(s: int, n: int, rng: np.random.Generator) -> list[np.ndarray]:
    return [random_list(n, rng) for _ in range(s)]


def beta_sampling(pi, beta_len: int, rng, start: Optional[int] = None) -> np.ndarray:
    """Move a block of ``beta_len`` consecutive jobs to the end of ``pi``.

    The block start is uniform on ``0..n-beta_len-1`` unless given.
    """
    pi = np.asarray(pi, dtype=np.int64)
    n = len(pi)
    if n <= beta_len:
        raise ValueError(f"beta sampling needs more than {beta_len} jobs, got {n}")
    if start is None:
        start = int(rng.integers(n - beta_len))
    if not 0 <= start <= n - beta_len:
        raise ValueError(f"block start {start} out of range")
    block = pi[start:start + beta_len]
    return np.concatenate([pi[:start], pi[start + beta_len:], block])


def swap_ops(pi, m: Optional[int], rng) -> np.ndarray:
    """Apply ``m`` random pair swaps; ``m=None`` draws ``floor(u*n)``,
    at least 1."""
    n = len(pi)
    if m is None:
        m = max(1, int(rng.random() * n))
    out = np.asarray(pi, dtype=np.int64)
    for _ in range(m):
        out = swap_jobs(out, rng)
    return out


def select_operator(probs: OperatorProbs, rng=None, r: Optional[float] = None) -> Operator:
    if r is None:
        r = rng.random()
    if r < probs.p_b:
        return Operator.BETA
    if r < probs.p_b + probs.p_j:
        return Operator.SWAP
    return Operator.RESTART


def adapt_probabilities(probs: OperatorProbs, chosen: Operator, rho: float) -> OperatorProbs:
    p = dict(zip(Operator, probs.as_tuple()))
    p[chosen] *= rho
    total = sum(p.values())
    vals = [p[op] / total for op in Operator]
    # absorb rounding in the largest component so the triple sums to one
    k = int(np.argmax(vals))
    vals[k] = 1.0 - sum(v for i, v in enumerate(vals) if i != k)
    return OperatorProbs(*vals)


def swap_all_job_pairs(
    pi,
    evaluate: Callable[[np.ndarray], float],
    cost: Optional[float] = None,
    deadline: Optional[float] = None,
    clock: Callable[[], float] = time.perf_counter,
) -> tuple[np.ndarray, float]:
    """First-improvement descent over all position pairs ``i < k``.

    Restarts the sweep after every improving swap and stops after a full
    sweep without one (or at ``deadline``).
    """
    cur = np.array(pi, dtype=np.int64, copy=True)
    cur_cost = evaluate(cur) if cost is None else float(cost)
    n = len(cur)
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            for k in range(i + 1, n):
                if deadline is not None and clock() >= deadline:
                    return cur, cur_cost
                cur[i], cur[k] = cur[k], cur[i]
                c = evaluate(cur)
                if c < cur_cost:
                    cur_cost = c
                    improved = True
                    break
                cur[i], cur[k] = cur[k], cur[i]
            if improved:
                break
    return cur, cur_cost


# ---------------------------------------------------------------------------
# driver


class _EvalClock:
    def __init__(self, evaluator: Evaluator, rate: float):
        self.evaluator = evaluator
        self.rate = rate

    def __call__(self) -> float:
        return self.evaluator.calls / self.rate


def run_apsa(inst: Instance, scen: UncertaintyScenario, params: ApsaParams,
             evaluator: Optional[Evaluator] = None) -> ApsaResult:
    """Search for a permutation minimising mean TWT over the scenario samples.

    ``pop_size=1`` gives plain simulated annealing with the same moves.
    """
    f = evaluator or Evaluator(inst, scen)
    clock = time.perf_counter if params.eval_rate is None else _EvalClock(f, params.eval_rate)
    t_start = clock()
    deadline = t_start + params.time_limit
    rng = np.random.default_rng(params.seed)
    n = inst.n
    beta_len = params.beta_len
    if n > 1 and beta_len >= n:
        beta_len = n - 1
        log.info("beta_len %d clamped to %d for a %d-job instance", params.beta_len, beta_len, n)

    population = init_population(params.pop_size, n, rng)
    costs = [f(p) for p in population]
    k = int(np.argmin(costs))
    best, best_cost = population[k].copy(), costs[k]
    probs = params.initial_probs
    counts = {op: 0 for op in Operator}
    prob_trace = [probs]
    history = [TracePoint(clock() - t_start, best_cost, probs, f.calls)]
    generations = mh_runs = 0

    while n > 1 and clock() < deadline:
        for i in range(params.pop_size):
            if clock() >= deadline:
                break
            mh = metropolis_hastings(population[i], params.mh, f, rng, deadline=deadline,
                                     clock=clock, cost=costs[i])
            mh_runs += 1
            population[i], costs[i] = mh.incumbent, mh.incumbent_cost
            if mh.best_cost < best_cost:
                best, best_cost = mh.best.copy(), mh.best_cost

            op = select_operator(probs, rng)
            if op is Operator.BETA:
                population[i] = beta_sampling(best, beta_len, rng)
            elif op is Operator.SWAP:
                population[i] = swap_ops(population[i], None, rng)
            else:
                population[i] = random_list(n, rng)
            costs[i] = f(population[i])
            if costs[i] < best_cost:
                best, best_cost = population[i].copy(), costs[i]
            counts[op] += 1
            probs = adapt_probabilities(probs, op, params.rho)
            prob_trace.append(probs)
            history.append(TracePoint(clock() - t_start, best_cost, probs, f.calls))
        generations += 1

    pre_polish = best_cost
    polish_deadline = None
    if params.polish_time_limit is not None:
        polish_deadline = clock() + params.polish_time_limit
    best_pi, best_cost = swap_all_job_pairs(best, f, cost=best_cost, deadline=polish_deadline,
                                            clock=clock)
    elapsed = clock() - t_start
    history.append(TracePoint(elapsed, best_cost, probs, f.calls))
    value = f.value(best_pi)
    log.info("apsa done: best=%.6f gens=%d evals=%d", value.mean_twt, generations, f.calls)
    return ApsaResult(best_pi, value, history, counts, prob_trace, elapsed, f.calls, generations,
                      mh_runs, pre_polish)


def sa_params(params: ApsaParams) -> ApsaParams:
    """The single-member baseline matching ``params``."""
    return replace(params, pop_size=1)
