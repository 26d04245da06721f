import numpy as np
import pytest

from reach_geo.domain.errors import DimensionError
from reach_geo.domain.geometry import (
    collinearity_residual,
    curve_energy,
    curve_length,
    eval_fields_1d,
    eval_fields_2d,
    is_unimodal,
    rescale_to_unit_interval,
    sign_relevant_zero_count,
)
from reach_geo.domain.models import HorizontalControls, State1D, State2D, Trajectory


def _trajectory_1d(parameter):
    n = len(parameter)
    return Trajectory(model="1d", parameter=np.asarray(parameter, dtype=float), states=np.zeros((n, 4)))


def test_fields_1d_follow_state():
    x1, x2 = eval_fields_1d(State1D(t=0.3, x=1.0, v=2.0, a=-1.5))
    np.testing.assert_allclose(x1, [1.0, 2.0, -1.5, 0.0])
    np.testing.assert_allclose(x2, [0.0, 0.0, 0.0, 1.0])


def test_fields_2d_rotate_with_heading():
    x1, x2, x3 = eval_fields_2d(State2D(theta=np.pi / 2, v=2.0, a=0.5))
    np.testing.assert_allclose(x1, [1.0, 0.0, 2.0, 0.0, 0.5, 0.0], atol=1e-15)
    assert x2[3] == 1.0 and x3[5] == 1.0


def test_constant_speed_length_and_energy():
    traj = _trajectory_1d(np.linspace(0.0, 2.0, 51))
    controls = HorizontalControls(alpha1=np.full(51, 3.0), alpha2=np.full(51, 4.0))
    assert curve_length(traj, controls) == pytest.approx(10.0)
    assert curve_energy(traj, controls) == pytest.approx(25.0)


def test_unit_rescale_gives_energy_half_length_squared():
    traj = _trajectory_1d(np.linspace(0.0, 7.5, 101))
    controls = HorizontalControls(alpha1=np.full(101, 0.6), alpha2=np.full(101, 0.8))
    length = curve_length(traj, controls)
    unit_traj, unit_controls = rescale_to_unit_interval(traj, controls)
    assert unit_traj.parameter[-1] == pytest.approx(1.0)
    assert curve_length(unit_traj, unit_controls) == pytest.approx(length)
    assert curve_energy(unit_traj, unit_controls) == pytest.approx(length ** 2 / 2)


def test_length_rejects_sample_mismatch():
    traj = _trajectory_1d(np.linspace(0.0, 1.0, 5))
    controls = HorizontalControls(alpha1=np.ones(4), alpha2=np.zeros(4))
    with pytest.raises(DimensionError):
        curve_length(traj, controls)


def test_length_rejects_model_mismatch():
    traj = _trajectory_1d(np.linspace(0.0, 1.0, 5))
    controls = HorizontalControls.admissible_2d(0.0, np.zeros(5))
    with pytest.raises(DimensionError):
        curve_energy(traj, controls)


def test_unimodal_bell():
    tau = np.linspace(0.0, 1.0, 101)
    assert is_unimodal(30 * tau ** 2 * (1 - tau) ** 2)
    assert not is_unimodal(np.sin(4 * np.pi * tau))
    assert not is_unimodal(tau)


def test_quintic_acceleration_has_three_relevant_zeros():
    tau = np.linspace(0.0, 1.0, 101)
    accel = 60 * tau - 180 * tau ** 2 + 120 * tau ** 3
    assert sign_relevant_zero_count(accel) == 3


def test_zero_count_ignores_touching_without_sign_change():
    values = np.array([1.0, 0.5, 0.0, 0.5, 1.0])
    assert sign_relevant_zero_count(values) == 0


def test_collinearity():
    s = np.linspace(0.0, 1.0, 11)
    assert collinearity_residual(2 * s, 3 * s) == pytest.approx(0.0, abs=1e-12)
    assert collinearity_residual(s, s * (1 - s)) == pytest.approx(0.25, rel=1e-12)


def _jerk_equals_time(samples):
    # curva admissível com α1 = 1 e jerk j(t) = t
    t = np.linspace(0.0, 1.0, samples)
    return _trajectory_1d(t), HorizontalControls(alpha1=np.ones(samples), alpha2=t)


def test_length_and_energy_for_linear_jerk():
    traj, controls = _jerk_equals_time(2001)
    exact = (np.sqrt(2.0) + np.arcsinh(1.0)) / 2
    assert exact == pytest.approx(1.1478, abs=1e-4)
    assert curve_length(traj, controls) == pytest.approx(exact, rel=1e-6)
    assert curve_energy(traj, controls) == pytest.approx(2 / 3, rel=1e-6)


def test_length_quadrature_is_second_order():
    exact = (np.sqrt(2.0) + np.arcsinh(1.0)) / 2
    coarse = abs(curve_length(*_jerk_equals_time(21)) - exact)
    fine = abs(curve_length(*_jerk_equals_time(41)) - exact)
    assert 1.9 <= np.log2(coarse / fine) <= 2.1


def test_energy_bounds_half_length_squared_on_unit_interval(rng):
    traj = _trajectory_1d(np.linspace(0.0, 1.0, 101))
    for _ in range(20):
        controls = HorizontalControls(alpha1=rng.uniform(0.1, 2.0, 101), alpha2=rng.normal(size=101))
        length = curve_length(traj, controls)
        assert curve_energy(traj, controls) >= length ** 2 / 2 - 1e-12


def test_fields_2d_at_zero_heading_embed_1d_fields():
    x1, _, x3 = eval_fields_2d(State2D(t=0.3, x=1.0, y=-2.0, theta=0.0, v=2.0, a=-1.5))
    e1, e2 = eval_fields_1d(State1D(t=0.3, x=1.0, v=2.0, a=-1.5))
    # (t, x, v, a) dentro de (t, x, y, θ, v, a)
    layout = [0, 1, 4, 5]
    np.testing.assert_allclose(x1[layout], e1)
    np.testing.assert_allclose(x3[layout], e2)
    assert x1[2] == 0.0 and x1[3] == 0.0
