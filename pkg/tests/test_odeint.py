import numpy as np
import pytest

from reach_geo.domain.errors import DomainError, IntegrationError
from reach_geo.domain.models import StepControl
from reach_geo.infrastructure.integrators.odeint import integrate


def oscillator(s, y):
    return np.array([y[1], -y[0]])


def test_fixed_rk4_decay():
    solution = integrate(lambda s, y: -y, [1.0], (0.0, 1.0), StepControl.fixed(0.01))
    assert solution.s_end == pytest.approx(1.0)
    assert solution.y_end[0] == pytest.approx(np.exp(-1.0), abs=1e-9)
    assert len(solution.steps) == 100
    assert solution.complete


def test_adaptive_oscillator_accuracy(tight_control):
    solution = integrate(oscillator, [1.0, 0.0], (0.0, 2 * np.pi), tight_control)
    np.testing.assert_allclose(solution.y_end, [1.0, 0.0], atol=1e-7)
    assert solution.rejected >= 0
    assert solution.nfev > 0


def test_dense_output_on_requested_samples(tight_control):
    samples = np.linspace(0.0, 3.0, 37)
    solution = integrate(oscillator, [1.0, 0.0], (0.0, 3.0), tight_control, samples=samples)
    np.testing.assert_array_equal(solution.s, samples)
    np.testing.assert_allclose(solution.y[:, 0], np.cos(samples), atol=1e-7)
    np.testing.assert_allclose(solution.y[:, 1], -np.sin(samples), atol=1e-7)


def test_fixed_step_dense_output():
    samples = np.linspace(0.0, 1.0, 7)
    solution = integrate(lambda s, y: -y, [1.0], (0.0, 1.0), StepControl.fixed(0.05), samples=samples)
    np.testing.assert_allclose(solution.y[:, 0], np.exp(-samples), atol=1e-6)


def test_guard_stops_integration():
    solution = integrate(lambda s, y: np.array([-1.0]), [1.0], (0.0, 2.0), StepControl(),
                         guard=lambda s, y: y[0] > 0.5)
    assert solution.status == "guard"
    assert not solution.complete
    assert solution.s_end <= 0.5 + 1e-9
    assert solution.y_end[0] > 0.5


def test_guard_with_fixed_step():
    solution = integrate(lambda s, y: np.array([-1.0]), [1.0], (0.0, 2.0), StepControl.fixed(0.1),
                         guard=lambda s, y: y[0] > 0.45)
    assert solution.status == "guard"
    assert solution.s_end == pytest.approx(0.5)


def test_max_steps_raises_with_partial():
    ctrl = StepControl(abs_tol=1e-12, rel_tol=1e-12, max_steps=3)
    with pytest.raises(IntegrationError) as excinfo:
        integrate(oscillator, [1.0, 0.0], (0.0, 50.0), ctrl)
    assert excinfo.value.partial is not None
    assert len(excinfo.value.partial.steps) == 3


def test_min_step_failure_raises():
    ctrl = StepControl(min_step=1e-3)
    with pytest.raises(IntegrationError):
        integrate(lambda s, y: y ** 2, [1.0], (0.0, 2.0), ctrl)


def test_empty_span_returns_initial_point():
    solution = integrate(oscillator, [1.0, 0.0], (1.0, 1.0))
    assert len(solution.s) == 1
    np.testing.assert_array_equal(solution.y_end, [1.0, 0.0])


@pytest.mark.parametrize("samples", [[0.0, 0.5, 0.4], [0.0, 1.5], []])
def test_invalid_samples(samples):
    with pytest.raises(DomainError):
        integrate(oscillator, [1.0, 0.0], (0.0, 1.0), samples=samples)


def test_invalid_span():
    with pytest.raises(DomainError):
        integrate(oscillator, [1.0, 0.0], (1.0, 0.0))


def test_fixed_mode_requires_step():
    with pytest.raises(ValueError):
        StepControl(mode="fixed")


def test_adaptive_exponential_growth(tight_control):
    solution = integrate(lambda s, y: y, [1.0], (0.0, 1.0), tight_control)
    assert solution.y_end[0] == pytest.approx(np.e, abs=1e-8)


def test_fixed_rk4_observed_order():
    errors = []
    for step in (0.1, 0.05):
        solution = integrate(lambda s, y: -y, [1.0], (0.0, 1.0), StepControl.fixed(step))
        errors.append(abs(solution.y_end[0] - np.exp(-1.0)))
    assert np.log2(errors[0] / errors[1]) >= 3.8


def test_oscillator_energy_over_ten_periods(tight_control):
    span = (0.0, 20 * np.pi)
    samples = np.linspace(*span, 201)
    solution = integrate(oscillator, [1.0, 0.0], span, tight_control, samples=samples)
    energy = 0.5 * np.sum(solution.y ** 2, axis=1)
    assert np.max(np.abs(energy - 0.5)) <= 1e-6
    np.testing.assert_allclose(solution.y_end, [1.0, 0.0], atol=1e-6)
