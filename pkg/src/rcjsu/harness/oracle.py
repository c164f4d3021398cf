"""Exhaustive search over all job orderings, for small instances."""
from __future__ import annotations

import itertools
import math

import numpy as np

from ..instance import Instance, InstanceError, UncertaintyScenario
from ..scheduler import Evaluator, ObjectiveValue

DEFAULT_MAX_N = 9


def brute_force_oracle(inst: Instance, scen: UncertaintyScenario,
                       max_n: int = DEFAULT_MAX_N) -> tuple[np.ndarray, ObjectiveValue]:
    """Minimiser over all ``n!`` permutations.

    Permutations are visited in lexicographic order and only a strict
    improvement replaces the incumbent, so ties resolve to the
    lexicographically smallest minimiser.
    """
    if inst.n > max_n:
        raise InstanceError(f"oracle limited to {max_n} jobs ({math.factorial(max_n)} orders); "
                            f"instance has {inst.n}")
    f = Evaluator(inst, scen)
    best, best_cost = None, math.inf
    for perm in itertools.permutations(range(inst.n)):
        c = f(perm)
        if c < best_cost:
            best, best_cost = perm, c
    best = np.array(best, dtype=np.int64)
    return best, f.value(best)
