"""Tests for the Λ energy, the constrained minimizer and the interface blow-up."""
from __future__ import annotations

import numpy as np
import pytest

from core.grid import lp_norm, quad_trapezoid
from lambda_system.blowup import blowup_extract, interface_roots, lambda_sweep, limit_profiles_at
from lambda_system.energy import energy_lambda, energy_lambda_gradient
from lambda_system.solver import initial_bumps, lambda_residual, minimize_lambda, multipliers, t_lambda_profile
from models.errors import NoCrossing, WindowTooSmall
from models.schemas import Grid, Profile, SweepSettings
from tests.mocks import data as mock_data
from tests.mocks import oracles
from verify.gradient_check import gradient_fd_check


@pytest.fixture(scope="module")
def segregated():
    params = mock_data.make_lambda_params(Lambda=100.0)
    return params, minimize_lambda(params)


def test_energy_of_zero_pair_vanishes(lambda_params):
    zeros = Profile.zeros(lambda_params.grid)
    assert energy_lambda(zeros, zeros, lambda_params, 0.0) == 0.0


def test_energy_of_constant_component():
    params = mock_data.make_lambda_params(a=0.0, b=1.0, n=11, alpha=1.0, Lambda=0.0)
    c = 1.5
    u = Profile.from_function(params.grid, lambda x: np.full_like(x, c))
    v = Profile.zeros(params.grid)
    assert energy_lambda(u, v, params, 0.0) == pytest.approx(c**4 / 4.0)


def test_coupling_term_is_isolated():
    grid = Grid(a=-1.0, b=1.0, n=41)
    u = mock_data.random_profile(grid, seed=7)
    v = mock_data.random_profile(grid, seed=8)
    with_coupling = mock_data.make_lambda_params(Lambda=10.0, n=41)
    without = mock_data.make_lambda_params(Lambda=0.0, n=41)
    overlap = quad_trapezoid(u.with_values(u.values**2 * v.values**2))
    difference = energy_lambda(u, v, with_coupling, 0.0) - energy_lambda(u, v, without, 0.0)
    assert difference == pytest.approx(10.0 / 2.0 * overlap, rel=1e-12)


def test_energy_rejects_mismatched_grids(lambda_params):
    u = Profile.zeros(Grid(a=-1.0, b=1.0, n=11))
    v = Profile.zeros(Grid(a=-1.0, b=1.0, n=13))
    with pytest.raises(ValueError):
        energy_lambda(u, v, lambda_params, 0.0)
    with pytest.raises(ValueError):
        energy_lambda_gradient(u, v, lambda_params, 0.0)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_lambda_gradient_matches_finite_differences(p):
    params = mock_data.make_lambda_params(p=p, Lambda=50.0, alpha=1.0, beta=2.0, n=21)
    grid = params.grid
    u, v = mock_data.random_profile(grid, seed=11), mock_data.random_profile(grid, seed=12)
    assert gradient_fd_check("lambda", (u, v), p, 1e-2, params=params) <= 1e-6


def test_initial_bumps_are_normalized():
    grid = Grid(a=-1.0, b=1.0, n=201)
    u, v = initial_bumps(grid, 2.0)
    assert u[0] == u[-1] == v[0] == v[-1] == 0.0
    assert lp_norm(Profile(grid=grid, values=u), 2.0) == pytest.approx(1.0)
    assert grid.nodes[np.argmax(u)] < 0 < grid.nodes[np.argmax(v)]


def test_uncoupled_components_coincide():
    params = mock_data.make_lambda_params(Lambda=0.0)
    sol = minimize_lambda(params)
    np.testing.assert_allclose(sol.u.values, sol.v.values, atol=1e-6)
    assert sol.lambda1 == pytest.approx(sol.lambda2, rel=1e-6)


def test_linear_multiplier_matches_dense_eigenvalue():
    params = mock_data.make_lambda_params(Lambda=0.0, alpha=0.0, beta=0.0, a=0.0, b=np.pi, n=201)
    sol = minimize_lambda(params)
    expected = oracles.dirichlet_ground_eigenvalue(0.0, np.pi, 201)
    assert sol.lambda1 == pytest.approx(expected, rel=1e-3)
    assert expected == pytest.approx(1.0, rel=1e-3)


def test_multiplier_shifts_with_alpha(segregated):
    params, sol = segregated
    shifted = params.model_copy(update={"alpha": params.alpha + 0.5})
    base, _ = multipliers(sol, params)
    moved, _ = multipliers(sol, shifted)
    u = np.abs(sol.u.values)
    assert moved - base == pytest.approx(0.5 * quad_trapezoid(sol.u.with_values(u**4)), rel=1e-12)


def test_constraints_hold(segregated):
    _, sol = segregated
    for component in (sol.u, sol.v):
        assert lp_norm(component, 2.0) == pytest.approx(1.0, abs=1e-10)
        assert component.values[0] == 0.0 and component.values[-1] == 0.0
        assert np.min(component.values) >= 0.0


def test_euler_lagrange_residual(segregated):
    params, sol = segregated
    assert lambda_residual(sol, params) <= 10 * params.tol


def test_first_integral_level_is_positive(segregated):
    _, sol = segregated
    assert sol.T_Lambda > 0


def test_first_integral_is_constant_for_eigenfunction():
    params = mock_data.make_lambda_params(alpha=0.0, beta=0.0, Lambda=0.0)
    x = params.grid.nodes
    bump = np.cos(0.5 * np.pi * x)
    bump /= lp_norm(Profile(grid=params.grid, values=bump), 2.0)
    eigenvalue = (0.5 * np.pi) ** 2
    sol = mock_data.make_lambda_solution(bump, bump, params).model_copy(
        update={"lambda1": eigenvalue, "lambda2": eigenvalue}
    )
    profile, level, drift = t_lambda_profile(sol, params)
    assert profile.values.shape == (params.n,)
    assert level == pytest.approx(2.0 * eigenvalue * np.max(bump) ** 2, rel=1e-3)
    assert drift <= 1e-3


def test_stored_first_integral_matches_profile(segregated):
    params, sol = segregated
    _, level, drift = t_lambda_profile(sol, params)
    assert level == pytest.approx(sol.T_Lambda)
    assert drift == pytest.approx(sol.T_drift)


def test_larger_coupling_reduces_overlap(segregated):
    params, strong = segregated
    weak = minimize_lambda(params.model_copy(update={"Lambda": 1.0}))

    def overlap(sol):
        return quad_trapezoid(sol.u.with_values(sol.u.values**2 * sol.v.values**2))

    assert overlap(strong) < overlap(weak)


def test_exchange_symmetry():
    params = mock_data.make_lambda_params(alpha=1.0, beta=2.0, Lambda=50.0)
    u0, v0 = initial_bumps(params.grid, params.p)
    first = minimize_lambda(params)
    second = minimize_lambda(params.swapped(), initial=(v0, u0))
    np.testing.assert_allclose(second.u.values, first.v.values, atol=1e-6)
    np.testing.assert_allclose(second.v.values, first.u.values, atol=1e-6)
    assert second.lambda1 == pytest.approx(first.lambda2, rel=1e-6)


def test_symmetric_interface_sits_at_midpoint(segregated):
    params, sol = segregated
    report = blowup_extract(sol, params)
    assert abs(report.x_Lambda) <= params.grid.h
    assert report.m_Lambda > 0
    assert report.scale_invariant == pytest.approx(params.Lambda * report.m_Lambda**4)
    assert report.root_count >= 1


def test_interface_requires_a_crossing(lambda_params):
    u, _ = initial_bumps(lambda_params.grid, lambda_params.p)
    sol = mock_data.make_lambda_solution(u, 0.5 * u, lambda_params)
    assert interface_roots(sol) == []
    with pytest.raises(NoCrossing):
        blowup_extract(sol, lambda_params)


def test_limit_profiles_are_normalized_at_origin(limit_pair):
    U, V = limit_profiles_at(limit_pair, np.array([-1.0, 0.0, 1.0]), limit_pair.coupling)
    assert U[1] == pytest.approx(1.0)
    assert V[1] == pytest.approx(1.0)
    assert U[0] < U[1] < U[2]
    with pytest.raises(WindowTooSmall):
        limit_profiles_at(limit_pair, np.array([0.0, 1e3]), limit_pair.coupling)


@pytest.mark.slow
def test_sweep_approaches_limit_pair(limit_pair):
    params = mock_data.make_lambda_params(Lambda=1e2, n=801)
    report = lambda_sweep(params, SweepSettings(Lambdas=[1e2, 1e3, 1e4]), limit_pair=limit_pair)
    assert not report.failures
    assert len(report.entries) == 3
    invariants = [entry.scale_invariant for entry in report.entries]
    assert max(invariants) / min(invariants) <= 4.0
    edges = [entry.edge_scale for entry in report.entries]
    assert edges[0] < edges[1] < edges[2]
    assert report.distances[-1] < report.distances[0]
    assert np.all(np.diff(report.distances) <= 1e-12)
    levels = np.array([entry.T_Lambda for entry in report.entries])
    assert np.all(levels > 0)
    assert np.all(np.abs(levels / levels[0] - 1.0) <= 0.5)
    lambdas = [entry.lambda1 for entry in report.entries]
    assert max(lambdas) <= 3.0 * min(lambdas)
