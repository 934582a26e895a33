"""Tests for the Picard windows, the adaptive integrator, shooting and Perron relaxation."""
from __future__ import annotations

import numpy as np
import pytest
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import PchipInterpolator

from core.nonlinearity import phi_p
from ivp.integrator import integrate_regular, ivp_solve
from ivp.perron import perron_construct, subsolution, subsolution_residual
from ivp.picard import picard_map, picard_solve_local, picard_window
from ivp.shooting import scaled_decaying, shoot_decaying
from models.errors import BracketInvalid, StepUnderflow
from models.results import TrajectoryStatus
from models.schemas import Grid, IvpSpec, Profile, ScaledShootingSpec
from tests.mocks import oracles


def test_zero_data_gives_zero_trajectory():
    trajectory = ivp_solve(IvpSpec(p=2.0, y0=0.0, y1=0.0, x_max=3.0))
    assert trajectory.status is TrajectoryStatus.IDENTICALLY_ZERO
    assert np.all(trajectory.y == 0.0)
    assert trajectory.x_end == pytest.approx(3.0)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_picard_contracts_on_selected_window(p):
    spec = IvpSpec(p=p, y0=1.0, y1=0.0, x_max=2.0)
    _, _, delta = picard_window(spec)
    _, _, ratio = picard_solve_local(spec, delta)
    _, _, half_ratio = picard_solve_local(spec, delta / 2)
    assert ratio <= 0.9
    assert half_ratio <= 0.5


def test_picard_map_fixes_local_solution():
    spec = IvpSpec(p=3.0, y0=1.0, y1=0.5, x_max=2.0)
    solution, iterations, _ = picard_solve_local(spec, 0.25)
    image = picard_map(solution, spec)
    assert iterations > 1
    assert image.values[0] == pytest.approx(1.0)
    assert np.max(np.abs(image.values - solution.values)) <= 1e-8


@pytest.mark.parametrize("y1, linear", [(0.0, 0.0), (1.0, 1.0)])
def test_picard_map_of_constant_for_p_two(y1, linear):
    ones = Profile.from_function(Grid(a=0.0, b=1.0, n=1001), lambda x: 1.0)
    image = picard_map(ones, IvpSpec(p=2.0, y0=1.0, y1=y1))
    expected = 1.0 + linear * ones.x + ones.x**4 / 12.0
    np.testing.assert_allclose(image.values, expected, rtol=0, atol=1e-6)


def test_picard_window_matches_reference_for_p_two():
    spec = IvpSpec(p=2.0, y0=1.0, y1=0.0, x_max=2.0, step=1e-4, tol=1e-12)
    window, slopes, delta = picard_window(spec)
    xs, ys = oracles.rk4_ivp(2.0, 1.0, 0.0, delta, step=1e-4)
    reference = np.interp(window.x, xs, ys)
    assert np.max(np.abs(window.values - reference)) <= 1e-6
    assert slopes[0] == pytest.approx(0.0)


def test_integrator_matches_reference_for_p_two():
    spec = IvpSpec(p=2.0, y0=1.0, y1=0.0, x_max=2.0, step=1e-4, tol=1e-10)
    trajectory = ivp_solve(spec)
    assert trajectory.status is TrajectoryStatus.REACHED_XMAX
    xs, ys = oracles.rk4_ivp(2.0, 1.0, 0.0, 2.0, step=1e-4)
    reference = np.interp(trajectory.nodes, xs, ys)
    assert np.max(np.abs(trajectory.y - reference) / np.maximum(1.0, np.abs(reference))) <= 1e-6


def test_integrator_follows_negative_branch():
    trajectory = ivp_solve(IvpSpec(p=2.0, y0=-1.0, y1=0.0, x_max=1.5))
    assert trajectory.status is TrajectoryStatus.SIGN_CLASSIFIED_NEGATIVE
    assert np.all(np.diff(trajectory.nodes) > 0)


def test_integrator_enforces_step_floor():
    with pytest.raises(StepUnderflow) as caught:
        integrate_regular(2.0, 0.0, 1.0, 0.5, 2.0, tol=1e-10, min_step=0.5)
    assert caught.value.context["floor"] == 0.5
    sol = integrate_regular(2.0, 0.0, 1.0, 0.5, 2.0, tol=1e-10, min_step=1e-12 * 2.0)
    assert sol.t[-1] == pytest.approx(2.0)
    assert sol.t.size > 3


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_integrator_is_odd_in_the_data(p):
    up = ivp_solve(IvpSpec(p=p, y0=0.0, y1=1.0, x_max=2.0))
    down = ivp_solve(IvpSpec(p=p, y0=0.0, y1=-1.0, x_max=2.0))
    assert down.status is TrajectoryStatus.SIGN_CLASSIFIED_NEGATIVE
    np.testing.assert_allclose(down.nodes, up.nodes, rtol=0, atol=1e-12)
    np.testing.assert_allclose(down.y, -up.y, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(down.dy, -up.dy, rtol=1e-12, atol=1e-12)


def _resolved(trajectory):
    keep = trajectory.nodes <= trajectory.resolved_to
    return trajectory.nodes[keep], trajectory.y[keep], trajectory.dy[keep]


def _flux_residual(x, y, dy, p, weight=1.0):
    """sup |phi_p(y') - phi_p(y'(0)) - ∫ (p-1) w x^p phi_p(y)| along the samples."""
    flux = phi_p(dy, p)
    source = (p - 1.0) * weight * x**p * phi_p(y, p)
    return float(np.max(np.abs(flux - flux[0] - cumulative_trapezoid(source, x, initial=0.0))))


def test_shooting_finds_positive_decaying_solution():
    y_star, trajectory = shoot_decaying(2.0, -1.0)
    assert y_star > 0
    assert trajectory.y[0] == pytest.approx(y_star)
    assert np.all(trajectory.y > 0)
    assert np.all(np.diff(trajectory.y) <= 0)
    assert trajectory.y[-1] <= 1e-3
    resolved = trajectory.nodes <= trajectory.resolved_to
    xs, ys = oracles.rk4_ivp(2.0, y_star, -1.0, 2.0, step=1e-4)
    early = trajectory.nodes <= 2.0
    np.testing.assert_allclose(trajectory.y[early & resolved], np.interp(trajectory.nodes[early & resolved], xs, ys),
                               atol=1e-6)


def test_shooting_at_p_three_satisfies_equation():
    y_star, trajectory = shoot_decaying(3.0, -1.0)
    x, y, dy = _resolved(trajectory)
    assert y_star > 0
    assert x[-1] > 1.0
    assert np.all(y > 0)
    assert np.all(np.diff(y) < 0)
    assert np.all(np.diff(phi_p(dy, 3.0)) >= -1e-12)
    assert _flux_residual(x, y, dy, 3.0) <= 1e-4
    value = y_star + np.concatenate([[0.0], np.cumsum(0.5 * (dy[1:] + dy[:-1]) * np.diff(x))])
    assert np.max(np.abs(value - y)) <= 1e-4


def test_shooting_root_does_not_depend_on_bracket():
    y_star, _ = shoot_decaying(2.0, -1.0)
    narrow, _ = shoot_decaying(2.0, -1.0, bracket=(0.5 * y_star, 2.0 * y_star))
    assert narrow == pytest.approx(y_star, rel=1e-8)
    tight, _ = shoot_decaying(2.0, -1.0, bracket=((1.0 - 1e-6) * y_star, (1.0 + 1e-6) * y_star))
    assert tight == pytest.approx(y_star, rel=1e-8)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_shooting_is_homogeneous_in_the_slope(p):
    y_one, _ = shoot_decaying(p, -1.0)
    y_two, _ = shoot_decaying(p, -2.0)
    assert y_two == pytest.approx(2.0 * y_one, rel=1e-3)


def test_shooting_rejects_bad_bracket():
    with pytest.raises(BracketInvalid):
        shoot_decaying(2.0, -1.0, bracket=(1e2, 1e3))


def test_scaled_decaying_solution():
    _, unit = shoot_decaying(2.0, -1.0)
    scaled = scaled_decaying(ScaledShootingSpec(beta=2.0, gamma=2.0), 2.0)
    assert scaled.y[0] == pytest.approx(np.sqrt(2.0) * unit.y[0], rel=1e-6)
    assert scaled.dy[0] == pytest.approx(-2.0, rel=1e-6)


def test_scaled_decaying_solution_below_p_two():
    p = 1.5
    beta = 1.0 / (1.0 + 2.0 ** (1.0 / (p - 1.0)))
    assert beta == pytest.approx(0.2)
    scaled = scaled_decaying(ScaledShootingSpec(beta=beta, gamma=2.0), p)
    x, y, dy = _resolved(scaled)
    assert dy[0] == pytest.approx(-2.0, rel=1e-6)
    assert np.all(y > 0)
    assert _flux_residual(x, y, dy, p, weight=beta**p) <= 1e-4


def test_subsolution_residual_is_nonnegative():
    assert np.min(subsolution_residual(2.0, 6.0, 601)) >= 0.0


def test_perron_profile_is_bracketed(perron_profile):
    x, y = perron_profile.x, perron_profile.values
    assert y[0] == 1.0
    assert np.all(y <= 1.0)
    assert np.all(y >= subsolution(x) - 1e-15)
    assert np.all(np.diff(y) <= 0)


def test_perron_agrees_with_shooting(perron_profile):
    y_star, trajectory = shoot_decaying(2.0, -1.0)
    nodes = np.linspace(0.0, 4.0, 81)
    shot = PchipInterpolator(trajectory.nodes, trajectory.y / y_star)(nodes)
    relaxed = np.interp(nodes, perron_profile.x, perron_profile.values)
    assert np.max(np.abs(shot - relaxed)) <= 1e-3


def test_perron_rejects_impossible_budget():
    from models.errors import NoConvergence

    with pytest.raises(NoConvergence):
        perron_construct(3.0, 6.0, 201, max_iter=1)
