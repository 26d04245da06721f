import numpy as np
import numpy.polynomial.polynomial as P
import pytest

from reach_geo.domain.errors import DomainError
from reach_geo.domain.geometry import collinearity_residual
from reach_geo.domain.models import QuinticReach
from reach_geo.infrastructure.models.minjerk import (
    closed_form_cost,
    minjerk_cost,
    quintic_derivatives,
    quintic_position,
)


@pytest.fixture
def reach():
    return QuinticReach(x0=0.1, y0=-0.2, xT=0.4, yT=0.2, T=0.8)


def test_endpoints_and_midpoint(reach):
    x, y = quintic_position(reach, np.array([0.0, 0.4, 0.8]))
    np.testing.assert_allclose(x, [0.1, 0.25, 0.4])
    np.testing.assert_allclose(y, [-0.2, 0.0, 0.2], atol=1e-15)


def test_rest_at_both_ends(reach):
    (vx, vy), (ax, ay), _ = quintic_derivatives(reach, np.array([0.0, 0.8]))
    np.testing.assert_allclose(np.concatenate([vx, vy, ax, ay]), 0.0, atol=1e-12)


def test_peak_speed_at_midpoint(reach):
    (vx, vy), _, _ = quintic_derivatives(reach, 0.4)
    distance = np.hypot(0.3, 0.4)
    assert np.hypot(vx, vy) == pytest.approx(1.875 * distance / 0.8)


def test_unit_reach_profile():
    tau = np.linspace(0.0, 1.0, 11)
    x, _ = quintic_position(QuinticReach(xT=1.0), tau)
    np.testing.assert_allclose(x, 6 * tau ** 5 - 15 * tau ** 4 + 10 * tau ** 3, atol=1e-14)


def test_rejects_time_outside_interval(reach):
    with pytest.raises(DomainError):
        quintic_position(reach, 0.81)
    with pytest.raises(DomainError):
        quintic_derivatives(reach, -0.01)


def test_cost_matches_closed_form(reach):
    assert minjerk_cost(reach) == pytest.approx(closed_form_cost(reach), rel=1e-12)
    assert closed_form_cost(QuinticReach(xT=1.0)) == pytest.approx(360.0)


def _perturbed_cost(reach, epsilon, coefficients):
    """½∫ jerk² com x acrescido de ε τ³(1 − τ)³ p(τ)"""
    bump = P.polymul(P.polypow([0.0, 1.0, -1.0], 3), coefficients)
    nodes, weights = np.polynomial.legendre.leggauss(12)
    t = 0.5 * reach.T * (nodes + 1.0)
    _, _, (jx, jy) = quintic_derivatives(reach, t)
    jx = jx + epsilon * P.polyval(t / reach.T, P.polyder(bump, 3)) / reach.T ** 3
    return 0.25 * reach.T * float(np.dot(weights, jx ** 2 + jy ** 2))


def test_path_is_straight(reach):
    x, y = quintic_position(reach, np.linspace(0.0, 0.8, 101))
    assert collinearity_residual(x, y) <= 1e-12


@pytest.mark.parametrize("coefficients", [[1.0], [0.3, -2.0], [-1.0, 0.5, 4.0]])
def test_perturbations_raise_cost(reach, coefficients):
    optimal = minjerk_cost(reach)
    assert _perturbed_cost(reach, 0.0, coefficients) == pytest.approx(optimal, rel=1e-12)
    for epsilon in (1e-3, 0.05, 1.0):
        above = _perturbed_cost(reach, epsilon, coefficients)
        below = _perturbed_cost(reach, -epsilon, coefficients)
        assert above > optimal and below > optimal
        # o termo cruzado se anula: o custo é par em ε
        assert above == pytest.approx(below, rel=1e-10)


def test_cost_scales_with_fifth_power_of_duration():
    short = minjerk_cost(QuinticReach(xT=0.3, yT=0.4, T=1.0))
    long = minjerk_cost(QuinticReach(xT=0.3, yT=0.4, T=2.0))
    assert short / long == pytest.approx(32.0, rel=1e-12)
    assert short == pytest.approx(360.0 * 0.25, rel=1e-12)
