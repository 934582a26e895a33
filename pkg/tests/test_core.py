"""Unit tests for the nonlinearity, grid helpers and descent machinery."""
from __future__ import annotations

import numpy as np
import pytest
from pydantic import ValidationError

from core.descent import armijo_backtrack, descend, solve_metric, stage_tolerance, stiffness_bands
from core.grid import central_derivative, diff_forward, lp_norm, quad_midpoint, quad_trapezoid, trapezoid_weights
from core.nonlinearity import phi_p, phi_p_inv, phi_p_reg, phi_p_reg_slope
from models.errors import LineSearchFailure, MaxIterations
from models.schemas import Exponent, Grid, IvpSpec, LambdaParams, LimitProblem, Profile


def test_phi_p_values():
    assert phi_p(0.0, 3.0) == 0.0
    assert phi_p(-2.0, 3.0) == pytest.approx(-4.0)
    assert phi_p(2.0, 2.0) == pytest.approx(2.0)
    np.testing.assert_allclose(phi_p(np.array([-1.0, 0.0, 3.0]), 1.5), [-1.0, 0.0, np.sqrt(3.0)])


def test_phi_p_inv_inverts_phi_p():
    s = np.linspace(-3.0, 3.0, 13)
    for p in (1.5, 2.0, 3.0):
        np.testing.assert_allclose(phi_p_inv(phi_p(s, p), p), s, rtol=1e-12, atol=1e-14)


def test_regularized_map_reduces_to_phi_p_at_zero_eps():
    s = np.array([-2.0, -0.5, 0.0, 0.25, 4.0])
    np.testing.assert_allclose(phi_p_reg(s, 3.0, 0.0), phi_p(s, 3.0))


def test_regularized_slope_is_one_for_p_two():
    s = np.linspace(-2.0, 2.0, 9)
    np.testing.assert_allclose(phi_p_reg_slope(s, 2.0, 0.1), np.ones_like(s))
    np.testing.assert_allclose(phi_p_reg_slope(s, 2.0, 0.0), np.ones_like(s))


def test_regularized_slope_matches_difference_quotient():
    s, step = 0.3, 1e-6
    numeric = (phi_p_reg(s + step, 1.5, 0.1) - phi_p_reg(s - step, 1.5, 0.1)) / (2 * step)
    assert phi_p_reg_slope(s, 1.5, 0.1) == pytest.approx(numeric, rel=1e-7)


def test_trapezoid_weights():
    np.testing.assert_array_equal(trapezoid_weights(5), [0.5, 1.0, 1.0, 1.0, 0.5])


def test_quadrature_and_norms():
    grid = Grid(a=0.0, b=1.0, n=1001)
    assert quad_trapezoid(Profile.from_function(grid, lambda x: x**2)) == pytest.approx(1.0 / 3.0, abs=1e-6)
    assert quad_midpoint(np.ones(10), 0.1) == pytest.approx(1.0)
    constant = Profile.from_function(Grid(a=0.0, b=2.0, n=11), np.ones_like)
    assert lp_norm(constant, 3.0) == pytest.approx(2.0 ** (1.0 / 3.0))


def test_lp_norm_rejects_exponent_below_one():
    with pytest.raises(ValueError):
        lp_norm(Profile.zeros(Grid(a=0.0, b=1.0, n=5)), 0.5)


def test_derivatives_are_exact_on_polynomials():
    grid = Grid(a=-1.0, b=1.0, n=21)
    linear = Profile.from_function(grid, lambda x: 3.0 * x + 1.0)
    np.testing.assert_allclose(diff_forward(linear), np.full(20, 3.0))
    np.testing.assert_allclose(central_derivative(grid.nodes**2, grid), 2.0 * grid.nodes, atol=1e-12)


def test_stiffness_bands_for_p_two():
    h = 0.5
    diag, off = stiffness_bands(np.array([0.0, 1.0, 3.0, 2.0, 0.0]), h, 2.0, 0.0)
    np.testing.assert_allclose(diag, np.full(3, 2.0 / h))
    np.testing.assert_allclose(off, np.full(2, -1.0 / h))


def test_solve_metric_matches_dense_solve():
    diag = np.array([4.0, 5.0, 6.0, 7.0])
    off = np.array([-1.0, -2.0, -0.5])
    rhs = np.array([1.0, -2.0, 0.5, 3.0])
    dense = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    np.testing.assert_allclose(solve_metric(diag, off, rhs), np.linalg.solve(dense, rhs))


def test_armijo_accepts_full_step_on_quadratic():
    step = armijo_backtrack(lambda x: float(x @ x), np.array([1.0]), np.array([-1.0]), 1.0, -2.0)
    assert step is not None
    assert step.step == 1.0
    assert step.value == 0.0


def test_armijo_gives_up_on_ascent_direction():
    assert armijo_backtrack(lambda x: float(x @ x), np.array([1.0]), np.array([1.0]), 1.0, -2.0) is None


def _quadratic_stage(max_iter, final):
    return descend(
        np.array([1.0, 2.0]),
        energy=lambda x: 0.5 * float(x @ x),
        gradient=lambda x: x.copy(),
        direction=lambda x, g: -g,
        stationarity=lambda x, g: float(np.max(np.abs(g))),
        tol=1e-10,
        max_iter=max_iter,
        final=final,
        eps=0.1,
    )


def test_descend_converges_on_quadratic():
    x, record = _quadratic_stage(50, final=True)
    np.testing.assert_allclose(x, 0.0, atol=1e-10)
    assert record.energies[-1] <= record.energies[0]


def test_descend_raises_only_on_final_stage():
    with pytest.raises(MaxIterations):
        _quadratic_stage(0, final=True)
    x, record = _quadratic_stage(0, final=False)
    np.testing.assert_array_equal(x, [1.0, 2.0])
    assert record.iterations == 0


def _stalled_stage(final):
    start = np.array([1.0, 2.0])
    return descend(
        start,
        energy=lambda x: 0.0 if np.array_equal(x, start) else 1.0,
        gradient=lambda x: np.full(2, 5e-3),
        direction=lambda x, g: -g,
        stationarity=lambda x, g: float(np.max(np.abs(g))),
        tol=1e-3,
        max_iter=10,
        final=final,
        eps=0.0,
    )


def test_final_stage_stall_raises_within_ten_times_tolerance():
    with pytest.raises(LineSearchFailure):
        _stalled_stage(final=True)
    x, record = _stalled_stage(final=False)
    np.testing.assert_array_equal(x, [1.0, 2.0])
    assert record.grad_norm == pytest.approx(5e-3)


def test_stage_tolerance():
    assert stage_tolerance(1e-2, 1e-8, final=False) == 1e-2
    assert stage_tolerance(1e-2, 1e-8, final=True) == 1e-8


def test_grid_and_profile_validation():
    with pytest.raises(ValidationError):
        Grid(a=1.0, b=0.0, n=11)
    grid = Grid(a=0.0, b=1.0, n=3)
    with pytest.raises(ValidationError):
        Profile(grid=grid, values=[0.0, np.nan, 1.0])
    with pytest.raises(ValidationError):
        Profile(grid=grid, values=[0.0, 1.0])


def test_problem_validation():
    assert LimitProblem(p=2.0, n=800).n == 801
    with pytest.raises(ValidationError):
        LimitProblem(p=0.5)
    with pytest.raises(ValidationError):
        LimitProblem(p=2.0, eps_schedule=(1e-2, 1e-1))
    with pytest.raises(ValidationError):
        LambdaParams(p=2.0, Lambda=-5.0)


def test_exponent_validation():
    assert Exponent(p=1.5).eps == 0.0
    with pytest.raises(ValidationError):
        Exponent(p=1.0)
    with pytest.raises(ValidationError):
        Exponent(p=2.0, eps=-1.0)
    with pytest.raises(ValidationError):
        IvpSpec(p=1.0)
    assert LimitProblem(p=2.0).exponent == Exponent(p=2.0, eps=1e-6)
    assert LambdaParams(p=3.0, Lambda=10.0, eps_schedule=(1e-2, 1e-3)).exponent.eps == 1e-3


@pytest.mark.parametrize("p", [1.2, 1.5, 2.0, 3.0, 4.0])
def test_phi_p_inv_round_trip_over_twelve_decades(p):
    magnitude = np.logspace(-6.0, 6.0, 49)
    s = np.concatenate([-magnitude[::-1], magnitude])
    np.testing.assert_allclose(phi_p_inv(phi_p(s, p), p), s, rtol=1e-12)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_small_eps_regularization_is_close_to_phi_p(p):
    magnitude = np.linspace(1e-2, 10.0, 200)
    s = np.concatenate([-magnitude, magnitude])
    np.testing.assert_allclose(phi_p_reg(s, p, 1e-8), phi_p(s, p), rtol=0, atol=1e-6)
    assert phi_p_reg(3.0, 3.0, 4.0) == pytest.approx(15.0)


def test_trapezoid_is_second_order():
    def error(n):
        f = Profile.from_function(Grid(a=0.0, b=1.0, n=n), lambda x: x**2)
        return abs(quad_trapezoid(f) - 1.0 / 3.0)

    coarse, fine = error(101), error(201)
    assert coarse <= 2e-5
    assert coarse / fine == pytest.approx(4.0, rel=0.05)


def test_forward_difference_and_cubic_norm():
    grid = Grid(a=0.0, b=1.0, n=101)
    square = Profile.from_function(grid, lambda x: x**2)
    np.testing.assert_allclose(diff_forward(square), 2.0 * grid.nodes[:-1] + grid.h, atol=1e-12)
    identity = Profile.from_function(grid, lambda x: x)
    assert lp_norm(identity, 3.0) == pytest.approx(0.25 ** (1.0 / 3.0), abs=1e-4)
