"""
Where the operator probabilities drift
======================================

Every time a perturbation is chosen its probability is multiplied by 0.9 and
the triple renormalised.  On average this pulls the three probabilities
towards one third each, whatever the starting point.
"""
import numpy as np

from rcjsu import prob_dynamics as pd
from rcjsu.apsa import INITIAL_PROBS, Operator, adapt_probabilities, select_operator

# expected trajectory from the default starting triple
traj = pd.integrate(INITIAL_PROBS.as_tuple(), 200)
for step in (0, 25, 50, 125, 200):
    p = traj[step]
    print(f"step {step:3d}: p_b={p[0]:.4f} p_j={p[1]:.4f} p_r={p[2]:.4f}  "
          f"gap {pd.distance_to_uniform(p):.2e}")

# one stochastic run wanders around the expected path
rng = np.random.default_rng(3)
probs = INITIAL_PROBS
for step in range(1, 201):
    probs = adapt_probabilities(probs, select_operator(probs, rng), 0.9)
    if step in (25, 50, 125, 200):
        print(f"sampled step {step:3d}:", np.round(probs.as_tuple(), 4))

# the seven equilibria, and how strongly the flow pushes elsewhere
for state, residual in pd.equilibria_residuals():
    print("equilibrium", np.round(state, 3), "residual", residual)
print("not an equilibrium: (0.4, 0.4, 0.2) ->", pd.ode_rhs((0.4, 0.4, 0.2)))

# many random starts, all pulled to the middle
starts = np.random.default_rng(0).dirichlet(np.ones(3), size=1000)
print("worst gap after 500 steps:", pd.distance_to_uniform(pd.integrate(starts, 500)[-1]))
