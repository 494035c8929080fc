import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ckbateman.classical import (
    ClassicalParams, PhaseState, bat2ck, canonical_jacobian, ck_closed_form,
    ck_initial_state, constrained_reduction_check, dualeq_residuals, hamiltonian, integrate,
    richardson_state, spline_dualeq_residuals, summary_json, symplectic_defect, time_reversal,
    transformed_flow_residual,
)

P = ClassicalParams()
S0 = np.array([1.0, 0.5, -0.3, 0.8])
states = st.lists(st.floats(-2, 2), min_size=4, max_size=4).map(np.array)


def test_equilibrium_stays_at_rest():
    traj = integrate(np.zeros(4), 5.0, 1e-10, P)
    assert np.all(traj.states == 0)


def test_energy_is_conserved():
    traj = integrate(S0, 10 / P.gamma, 1e-10, P)
    assert traj.relative_energy_drift() <= 1e-9


def test_undamped_limit_conserves_energy():
    traj = integrate(S0, 20.0, 1e-10, ClassicalParams(gamma=0.0))
    assert traj.relative_energy_drift() <= 1e-9


def test_dual_equations_hold():
    traj = integrate(S0, 10 / P.gamma, 1e-10, P)
    rx, ry = dualeq_residuals(traj)
    assert rx <= 1e-8 and ry <= 1e-8


def test_spline_residuals_are_consistent():
    traj = integrate(S0, 10.0, 1e-11, P)
    rx, ry = spline_dualeq_residuals(traj)
    assert rx < 1e-3 and ry < 1e-3


def test_against_richardson_oracle():
    exact = integrate(S0, 2.0, 1e-12, P).states[-1]
    assert np.abs(richardson_state(S0, 2.0, P) - exact).max() < 1e-9


def test_time_reversal_duality():
    T = 3.0
    zT = integrate(S0, T, 1e-12, P).states[-1]
    back = integrate(time_reversal(zT), T, 1e-12, P).states[-1]
    assert np.allclose(back, time_reversal(S0), atol=1e-9)


@given(states, st.floats(0, 25))
def test_symplectic_jacobian(s, t):
    assert symplectic_defect(canonical_jacobian(s, t, P)) <= 1e-10


@given(states, st.floats(0, 25))
def test_transformed_flow_is_hamiltonian(s, t):
    assert transformed_flow_residual(s, t, P) <= 1e-10


def test_complex_step_jacobian_matches_finite_difference():
    s, t, h = S0, 1.3, 1e-6
    J = canonical_jacobian(s, t, P)
    fd = np.column_stack([(bat2ck(s + h * e, t, P) - bat2ck(s - h * e, t, P)) / (2 * h)
                          for e in np.eye(4)])
    assert np.abs(J - fd).max() < 1e-7


@pytest.mark.parametrize("params, t_end", [
    (ClassicalParams(), 25.0),
    (ClassicalParams(gamma=3.0, omega=1.0), 2.0),   # overdamped, short horizon
])
def test_constrained_reduction(params, t_end):
    res = constrained_reduction_check(1.0, 0.0, params, t_end)
    assert res.max_deviation <= 1e-7


def test_map_is_singular_at_critical_damping():
    with pytest.raises(ZeroDivisionError):
        bat2ck(S0, 0.0, ClassicalParams(gamma=2.0, omega=1.0))


def test_closed_form_initial_data():
    for params in (ClassicalParams(), ClassicalParams(gamma=2.0), ClassicalParams(gamma=3.0)):
        assert abs(ck_closed_form(0.7, -0.2, 0.0, params) - 0.7) < 1e-15
        h = 1e-6
        v = (ck_closed_form(0.7, -0.2, h, params) - ck_closed_form(0.7, -0.2, -h, params)) / (2 * h)
        assert abs(v + 0.2) < 1e-8


def test_initial_state_lies_on_constraint():
    z0 = ck_initial_state(1.0, 0.5, P)
    assert np.allclose(bat2ck(z0, 0.0, P), [1.0, 0.5, 0.0, 0.0])


def test_csv_and_summary():
    traj = integrate(S0, 1.0, 1e-10, P)
    rows = list(csv.reader(io.StringIO(traj.to_csv())))
    assert rows[0] == ["t", "x", "p_x", "y", "p_y", "H"]
    assert len(rows) == len(traj) + 1
    assert float(rows[1][5]) == pytest.approx(hamiltonian(S0, P))
    assert '"energy_drift"' in summary_json(traj)


def test_input_validation():
    with pytest.raises(ValueError):
        integrate(S0, 1.0, 0.0, P)
    with pytest.raises(ValueError):
        PhaseState(float("nan"), 0, 0, 0)
    with pytest.raises(ValueError):
        ClassicalParams(m=0)


@settings(max_examples=20)
@given(states)
def test_hamiltonian_flow_preserves_energy_for_random_states(s):
    traj = integrate(s, 5.0, 1e-10, P)
    assert traj.relative_energy_drift() <= 1e-9


def test_undamped_energy_example():
    params = ClassicalParams(gamma=0.0, omega=1.0)
    traj = integrate((1.0, 0.0, 1.0, 0.0), 20.0, 1e-10, params)
    assert traj.energy_drift() <= 1e-9


def test_richardson_example_at_unit_time():
    params = ClassicalParams.from_Omega(1.0, 0.4, 1.0)
    s0 = (1.0, 0.0, 0.0, 1.0)
    traj = integrate(s0, 1.0, 1e-10, params)
    assert np.abs(traj.states[-1] - richardson_state(s0, 1.0, params)).max() <= 1e-8


def test_orthogonal_mixing_at_t0_without_damping():
    params = ClassicalParams(gamma=0.0)
    r = 1 / np.sqrt(2)
    x, px, y, py = 0.3, -0.7, 1.1, 0.2
    got = bat2ck((x, px, y, py), 0.0, params)
    assert np.allclose(got, [r * (x + y), r * (px + py), r * (y - x), r * (py - px)])


def test_zero_reduction_and_undamped_reduction():
    res = constrained_reduction_check(0.0, 0.0, P, 10.0)
    assert np.all(res.primed == 0)
    params = ClassicalParams(gamma=0.0, omega=1.0)
    res = constrained_reduction_check(1.0, 0.0, params, 10.0)
    assert np.abs(res.primed[:, 0] - np.cos(res.trajectory.t)).max() <= 1e-7


def test_transformed_trajectory_follows_ck_pair_flow():
    """Trajectory-level check: finite differences of the mapped dense output."""
    from ckbateman.classical import ck_pair_rhs
    traj = integrate(S0, 12.0, 1e-12, P)
    h = 1e-4
    for t in np.linspace(1.0, 11.0, 21):
        zs = traj.sample([t - h, t, t + h])
        primed = [bat2ck(z, tt, P) for z, tt in zip(zs, (t - h, t, t + h))]
        deriv = (primed[2] - primed[0]) / (2 * h)
        expected = ck_pair_rhs(primed[1], t, P)
        assert np.abs(deriv - expected).max() <= 1e-6 * max(1.0, np.abs(expected).max())
