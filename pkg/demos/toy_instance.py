"""
Three jobs, one shared resource
===============================

Three single-period jobs sit on three machines.  Jobs 2 and 3 each need the
whole resource, so at most one of them runs per period, and job 3 has the
tightest due date and the largest weight.
"""
import itertools
from pathlib import Path

from rcjsu import UncertaintyScenario, brute_force_oracle, decode, evaluate, read_instance
from rcjsu.apsa import ApsaParams, run_apsa

inst = read_instance(Path(__file__).parent.parent / "tests" / "data" / "toy3.rcj")
scen = UncertaintyScenario((10.0,), 1.0, 0, 10.0)

# decode every priority order and print the resulting start times
for order in itertools.permutations(range(inst.n)):
    sched = decode(inst, 10.0, order)
    names = [inst.job_names[j] for j in order]
    starts = {inst.job_names[j]: int(t) for j, t in enumerate(sched.starts)}
    print(f"order {names}: starts {starts}  TWT {evaluate(inst, scen, order).mean_twt:.2f}")

# exhaustive search agrees with the best row above
pi, value = brute_force_oracle(inst, scen)
print("oracle:", [inst.job_names[j] for j in pi], value.mean_twt)

# and so does a short annealing run
res = run_apsa(inst, scen, ApsaParams(time_limit=0.5, seed=0))
print("apsa:  ", [inst.job_names[j] for j in res.best_pi], res.best_value.mean_twt)
