"""Expected behaviour of the adaptive operator probabilities.

One adaptation step picks operator ``x`` with probability ``p_x``, scales
``p_x`` by ``rho`` and renormalises.  Averaging over the choice gives a
deterministic map on the simplex whose only stable fixed point is the
uniform distribution.
"""
from __future__ import annotations

import numpy as np

UNIFORM = np.full(3, 1.0 / 3.0)

# the seven equilibria of the flow restricted to the simplex
EQUILIBRIA = (
    (0.0, 0.0, 1.0),
    (0.0, 1.0, 0.0),
    (1.0, 0.0, 0.0),
    (0.0, 0.5, 0.5),
    (0.5, 0.0, 0.5),
    (0.5, 0.5, 0.0),
    (1 / 3, 1 / 3, 1 / 3),
)


def _as_state(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim == 0 or p.shape[-1] != 3:
        raise ValueError(f"expected 3-vectors along the last axis, got shape {p.shape}")
    return p


def expected_next(p, rho: float = 0.9) -> np.ndarray:
    """Expected probabilities after one adaptation step.

    Term ``y`` is the chance ``p_y`` of picking operator ``y`` times the
    renormalised vector after decaying ``p_y``.  Accepts a batch of states
    stacked along leading axes.
    """
    p = _as_state(p)
    d = 1.0 - rho
    # the actual total rather than 1: on the simplex this is the same, but a
    # closed form that assumes sum 1 doubles any rounding drift every step
    total = p.sum(axis=-1, keepdims=True)
    a = 1.0 / (total - d * p)
    # scaled[..., y, x] is component x after operator y was chosen
    scaled = p[..., None, :] * a[..., :, None]
    idx = np.arange(3)
    scaled[..., idx, idx] *= rho
    return np.einsum("...y,...yx->...x", p, scaled)


def ode_rhs(p, rho: float = 0.9) -> np.ndarray:
    """Right-hand side of the continuous-time probability flow."""
    p = _as_state(p)
    d = 1.0 - rho
    pb, pj, pr = p[..., 0], p[..., 1], p[..., 2]
    qb, qj, qr = pb * pb / (1 - d * pb), pj * pj / (1 - d * pj), pr * pr / (1 - d * pr)
    return np.stack([
        d * pb * (qj + qr - pb * (pj + pr) / (1 - d * pb)),
        d * pj * (qr + qb - pj * (pb + pr) / (1 - d * pj)),
        d * pr * (qb + qj - pr * (pb + pj) / (1 - d * pr)),
    ], axis=-1)


def integrate(p0, steps: int, rho: float = 0.9) -> np.ndarray:
    """Iterate :func:`expected_next`; returns a ``(steps + 1, ..., 3)`` trajectory."""
    p0 = _as_state(p0)
    traj = np.empty((steps + 1,) + p0.shape)
    traj[0] = p0
    for t in range(steps):
        traj[t + 1] = expected_next(traj[t], rho)
    return traj


def equilibria_residuals(rho: float = 0.9) -> list[tuple[tuple[float, float, float], float]]:
    return [(state, float(np.linalg.norm(ode_rhs(state, rho)))) for state in EQUILIBRIA]


def distance_to_uniform(p) -> float:
    """Largest componentwise gap to (1/3, 1/3, 1/3), over a whole batch if given."""
    return float(np.max(np.abs(np.asarray(p) - UNIFORM)))


def trajectory_csv(traj: np.ndarray) -> str:
    rows = ["step,p_b,p_j,p_r"]
    rows += [f"{t},{pb!r},{pj!r},{pr!r}" for t, (pb, pj, pr) in enumerate(traj.tolist())]
    return "\n".join(rows) + "\n"
