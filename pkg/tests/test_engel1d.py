import numpy as np
import pytest

from reach_geo.domain.errors import AdmissibilityError, DomainError, HorizonError, PreconditionError
from reach_geo.domain.models import Covector1D, HamState1D, JerkPolynomial, State1D
from reach_geo.infrastructure.models.engel1d import (
    CONNECTIVITY_INVERSE,
    CONNECTIVITY_MATRIX,
    Engel1DModel,
    admissible_controls_1d,
    admissible_length_bound_1d,
    conservation_report_1d,
    connect_admissible_1d,
    flow_1d,
    ham_rhs_1d,
    hamiltonian_1d,
    integrate_admissible_1d,
    reparam_accel_1d,
)


def test_hamiltonian_and_rhs_at_rest():
    hs = HamState1D(covector=Covector1D(p_t=0.6, p_x=0.2, p_v=-0.1, p_a=0.8))
    assert hamiltonian_1d(hs) == pytest.approx(0.5)
    np.testing.assert_allclose(ham_rhs_1d(hs), [0.6, 0.0, 0.0, 0.8, 0.0, 0.0, -0.12, 0.06])


def test_conservation_over_random_covectors(random_covector, tight_control):
    for _ in range(50):
        y0 = np.concatenate([np.zeros(4), random_covector(4)])
        traj = flow_1d(y0, (0.0, 1.0), tight_control, admissible=False)
        report = conservation_report_1d(traj)
        assert report.hamiltonian_drift <= 1e-8
        assert max(report.momentum_drift.values()) <= 1e-10
        assert report.speed_drift <= 1e-8
        assert max(report.law_drift.values()) <= 1e-8


def test_admissible_flow_rejects_nonpositive_h():
    y0 = np.array([0.0, 0.0, 0.0, 0.0, -0.2, 0.1, 0.0, 0.5])
    with pytest.raises(AdmissibilityError):
        flow_1d(y0, (0.0, 1.0))


def test_admissible_flow_stops_at_floor_with_partial():
    # h² = 2H − p_a² e p_a cresce com p_v < 0: h atinge zero em tempo finito
    y0 = np.array([0.0, 0.0, 0.0, 0.0, 0.3, 0.0, -1.0, 0.0])
    with pytest.raises(AdmissibilityError) as excinfo:
        flow_1d(y0, (0.0, 5.0))
    partial = excinfo.value.partial
    assert partial is not None and len(partial) > 1
    assert partial.parameter[-1] < 5.0


def test_admissible_controls_have_unit_alpha1(tight_control):
    y0 = np.array([0.0, 0.0, 0.0, 0.0, 1.0, 0.3, -0.2, 0.1])
    traj = flow_1d(y0, (0.0, 0.5), tight_control, samples=np.linspace(0.0, 0.5, 11))
    in_time, controls = admissible_controls_1d(traj)
    np.testing.assert_array_equal(controls.alpha1, 1.0)
    np.testing.assert_allclose(in_time.parameter, traj.column("t"))
    h = traj.column("v") * traj.column("p_x") + traj.column("a") * traj.column("p_v") + traj.column("p_t")
    np.testing.assert_allclose(controls.alpha2, traj.column("p_a") / h)


def test_connectivity_inverse_is_exact():
    np.testing.assert_allclose(CONNECTIVITY_MATRIX @ CONNECTIVITY_INVERSE, np.eye(3), atol=1e-12)


def test_rest_to_unit_reach_recovers_quintic_jerk():
    jerk = connect_admissible_1d((1.0, 0.0, 0.0))
    np.testing.assert_allclose(jerk.coefficients(), [60.0, -360.0, 720.0], atol=1e-10)


def test_connectivity_round_trips(rng):
    for _ in range(100):
        start = rng.uniform(-1.0, 1.0, 3)
        target = rng.uniform(-1.0, 1.0, 3)
        duration = rng.uniform(0.5, 2.0)
        jerk = connect_admissible_1d(tuple(target), tuple(start), duration)
        traj = integrate_admissible_1d(jerk, State1D(t=0.2, x=start[0], v=start[1], a=start[2]), duration)
        end = traj.states[-1]
        assert end[0] == pytest.approx(0.2 + duration)
        np.testing.assert_allclose(end[1:], target, atol=1e-8)


def test_connectivity_rejects_bad_duration():
    with pytest.raises(DomainError):
        connect_admissible_1d((1.0, 0.0, 0.0), duration=0.0)


def test_length_bound_for_zero_jerk_is_duration():
    assert admissible_length_bound_1d(JerkPolynomial(), duration=2.5) == pytest.approx(2.5)


def test_reparam_horizon_and_rates():
    reparam = reparam_accel_1d(p_t=1.0, p_v0=-1.0, p_a0=0.0, p_x=0.0)
    assert reparam.horizon == pytest.approx(1.0)
    assert reparam(0.0) == pytest.approx(0.0)
    assert reparam(0.6) == pytest.approx(0.6 / 0.8)
    with pytest.raises(HorizonError) as excinfo:
        reparam(1.5)
    assert excinfo.value.horizon == pytest.approx(1.0)
    with pytest.raises(DomainError):
        reparam(-0.1)


def test_reparam_without_root_uses_max_horizon():
    reparam = reparam_accel_1d(p_t=1.0, p_v0=0.0, p_a0=0.2, p_x=0.0, max_horizon=4.0)
    assert reparam.horizon == 4.0
    assert reparam(3.0) == pytest.approx(0.2)


def test_reparam_preconditions():
    with pytest.raises(PreconditionError):
        reparam_accel_1d(p_t=0.0, p_v0=0.0, p_a0=0.0, p_x=0.0)
    reparam = reparam_accel_1d(p_t=1.0, p_v0=0.0, p_a0=0.1, p_x=0.0)
    with pytest.raises(PreconditionError):
        reparam.flow(1.0, State1D(v=0.5))


def test_reparam_flow_integrates_acceleration(tight_control):
    reparam = reparam_accel_1d(p_t=1.0, p_v0=0.0, p_a0=0.6, p_x=0.0)
    traj = reparam.flow(2.0, samples=np.linspace(0.0, 2.0, 5), ctrl=tight_control)
    assert traj.column("a")[-1] == pytest.approx(2.0 * 0.6)


def test_model_seed_follows_connecting_curve():
    covector, length = Engel1DModel().seed({"t": 0.0, "x": 0.0, "v": 0.0, "a": 0.0},
                                           {"t": 1.0, "x": 1.0, "v": 0.0, "a": 0.0})
    assert covector.shape == (4,)
    assert covector[0] > 0
    assert length > 1.0


def test_rhs_is_symplectic_gradient_of_hamiltonian(rng):
    step = 1e-6
    for _ in range(10):
        y = rng.uniform(-1.0, 1.0, 8)
        gradient = np.zeros(8)
        for i in range(8):
            shift = np.zeros(8)
            shift[i] = step
            gradient[i] = (hamiltonian_1d(y + shift) - hamiltonian_1d(y - shift)) / (2 * step)
        # q' = ∂H/∂p e p' = −∂H/∂q
        np.testing.assert_allclose(ham_rhs_1d(y), np.concatenate([gradient[4:], -gradient[:4]]), atol=1e-8)


def test_reparam_reproduces_time_parametrized_flow(tight_control):
    p_t, p_x, p_v0, p_a0 = 1.0, 0.2, -0.3, 0.4
    traj = flow_1d(np.array([0.0, 0.0, 0.0, 0.0, p_t, p_x, p_v0, p_a0]), (0.0, 1.0), tight_control,
                   samples=np.linspace(0.0, 1.0, 21))
    t = traj.column("t")
    reparam = reparam_accel_1d(p_t=p_t, p_v0=p_v0, p_a0=p_a0, p_x=p_x)
    assert reparam.horizon > t[-1]

    in_time = reparam.flow(float(t[-1]), samples=t, ctrl=tight_control)
    np.testing.assert_allclose(in_time.states, traj.states, atol=1e-8)
    np.testing.assert_allclose(reparam.p_a(t), traj.covectors[:, 3], atol=1e-8)
