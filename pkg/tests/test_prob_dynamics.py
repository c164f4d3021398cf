import numpy as np
import pytest

from rcjsu.apsa import Operator, OperatorProbs, adapt_probabilities
from rcjsu.prob_dynamics import (
    EQUILIBRIA,
    UNIFORM,
    distance_to_uniform,
    equilibria_residuals,
    expected_next,
    integrate,
    ode_rhs,
    trajectory_csv,
)


def simplex_points(k, seed):
    return np.random.default_rng(seed).dirichlet(np.ones(3), size=k)


def test_expected_next_by_enumeration():
    # average the three possible adaptation outcomes weighted by their chance
    p = np.array([0.65, 0.3, 0.05])
    mean = np.zeros(3)
    for x, op in enumerate(Operator):
        mean += p[x] * np.array(adapt_probabilities(OperatorProbs(*p), op, 0.9).as_tuple())
    np.testing.assert_allclose(expected_next(p), mean, atol=1e-15)


@pytest.mark.parametrize("state", EQUILIBRIA)
def test_equilibria_are_fixed_points(state):
    np.testing.assert_allclose(expected_next(state), state, atol=1e-12)
    assert np.linalg.norm(ode_rhs(state)) < 1e-12


def test_listed_equilibria_examples():
    assert expected_next((1.0, 0.0, 0.0)).tolist() == [1.0, 0.0, 0.0]
    np.testing.assert_allclose(ode_rhs((0.0, 0.5, 0.5)), 0.0, atol=1e-15)
    np.testing.assert_allclose(ode_rhs(UNIFORM), 0.0, atol=1e-15)


def test_residual_table():
    table = equilibria_residuals()
    assert len(table) == 7
    assert all(r < 1e-12 for _, r in table)


def test_non_equilibrium_has_flow():
    assert np.linalg.norm(ode_rhs((0.4, 0.4, 0.2))) > 1e-3


def test_map_increment_equals_flow():
    for p in simplex_points(100, 0):
        np.testing.assert_allclose(expected_next(p) - p, ode_rhs(p), atol=1e-13)


def test_flow_matches_central_difference():
    traj = integrate((0.65, 0.3, 0.05), 2)
    central = (traj[2] - traj[0]) / 2
    rhs = ode_rhs(traj[1])
    # the iterates are a unit-step discretisation, so agreement is to first order
    np.testing.assert_allclose(central, rhs, rtol=0.05, atol=1e-4)
    assert rhs[0] < 0 < rhs[2]


def test_flow_scales_with_decay():
    p = (0.65, 0.3, 0.05)
    small = ode_rhs(p, rho=1 - 1e-6) / 1e-6
    assert np.all(np.isfinite(small))
    np.testing.assert_allclose(ode_rhs(p, rho=1.0), 0.0)


def test_simplex_preserved():
    for p in simplex_points(50, 1):
        traj = integrate(p, 30)
        assert traj.shape == (31, 3)
        np.testing.assert_allclose(traj.sum(axis=1), 1.0, atol=1e-12)
        assert traj.min() >= 0


def test_equilibrium_trajectory_constant():
    traj = integrate((1.0, 0.0, 0.0), 10)
    assert (traj == [1.0, 0.0, 0.0]).all()


def test_stability_probe():
    eps = 1e-4
    traj = integrate((1 / 3 + eps, 1 / 3 - eps, 1 / 3), 200)
    gaps = [distance_to_uniform(p) for p in traj]
    assert gaps[0] == pytest.approx(eps)
    assert gaps[-1] < gaps[0] / 10
    assert all(b <= a + 1e-18 for a, b in zip(gaps, gaps[1:]))


def test_operator_decay_order():
    # starting at the default triple the favoured move loses weight immediately
    nxt = expected_next((0.65, 0.3, 0.05))
    assert nxt[0] < 0.65 and nxt[2] > 0.05


def test_monte_carlo_mean_matches_map():
    rng = np.random.default_rng(11)
    draws = 200_000
    for p in simplex_points(5, 2):
        chosen = rng.choice(3, size=draws, p=p)
        scaled = np.tile(p, (draws, 1))
        scaled[np.arange(draws), chosen] *= 0.9
        samples = scaled / scaled.sum(axis=1, keepdims=True)
        se = samples.std(axis=0, ddof=1) / np.sqrt(draws)
        assert np.all(np.abs(samples.mean(axis=0) - expected_next(p)) <= 4 * se + 1e-15)


def test_bad_state_shape():
    with pytest.raises(ValueError):
        expected_next((0.5, 0.5))


def test_trajectory_csv():
    text = trajectory_csv(integrate(UNIFORM, 2))
    lines = text.splitlines()
    assert lines[0] == "step,p_b,p_j,p_r"
    assert len(lines) == 4
    assert lines[1].startswith("0,0.333")
