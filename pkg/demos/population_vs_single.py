"""
A population against a single annealer
======================================

The same moves and cooling run either on ten population members that share
a global best or on one member alone.  The comparison uses a deterministic
clock (evaluations per second) so the output is reproducible; pass a number
of seconds on the command line to change the budget.
"""
import sys

import numpy as np

from rcjsu import generate_scenario
from rcjsu.apsa import ApsaParams, run_apsa, sa_params
from rcjsu.instance import InstanceShape, random_instance

budget = float(sys.argv[1]) if len(sys.argv) > 1 else 3.0
inst = random_instance(InstanceShape(n=40, machines=4), np.random.default_rng(7))
scen = generate_scenario(inst, 0.7, 3, 1)
print(f"{inst.n} jobs, capacity samples {np.round(scen.capacities, 2)}")

for seed in range(3):
    params = ApsaParams(time_limit=budget, seed=seed, eval_rate=20_000)
    pop = run_apsa(inst, scen, params)
    single = run_apsa(inst, scen, sa_params(params))
    print(f"seed {seed}: population {pop.best_value.mean_twt:8.2f}   "
          f"single {single.best_value.mean_twt:8.2f}   "
          f"(operators used: {dict((k.value, v) for k, v in pop.operator_counts.items())})")

# how the population run spent its moves
last = pop.prob_trace[-1]
print("final operator probabilities:", np.round(last.as_tuple(), 3))
