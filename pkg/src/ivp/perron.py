"""Monotone relaxation between the sub-solution e^{-(x^2+2x)} and the super-solution 1."""
from __future__ import annotations

import numpy as np
import structlog
from scipy.linalg import solve_banded

from core.nonlinearity import phi_p
from models.errors import NoConvergence
from models.schemas import Grid, Profile

logger = structlog.get_logger()

SLOPE_FLOOR = 1e-12


def subsolution(x: np.ndarray) -> np.ndarray:
    return np.exp(-(x**2 + 2.0 * x))


def equation_residual(y: Profile, a_weight: Profile, p: float) -> np.ndarray:
    """Interior residual of (phi_p(y'))' - (p-1) a phi_p(y) in flux form.

    Nonnegative entries mark a sub-solution, nonpositive a super-solution.
    """
    h = y.grid.h
    flux = phi_p(np.diff(y.values) / h, p)
    return np.diff(flux) / h - (p - 1.0) * a_weight.values[1:-1] * phi_p(y.values[1:-1], p)


def subsolution_residual(p: float, R: float, n: int) -> np.ndarray:
    grid = Grid(a=0.0, b=R, n=n)
    lower = Profile.from_function(grid, subsolution)
    weight = Profile.from_function(grid, lambda x: x**p)
    return equation_residual(lower, weight, p)


def perron_construct(p: float, R: float, n: int, *, tol: float = 1e-12, max_iter: int = 500) -> Profile:
    """Discrete solution of |y'|^{p-2} y'' = x^p y^{p-1} on [0, R], y(0)=1, y(R)=w2(R).

    Each sweep freezes the coefficients |y'|^{p-2} and (p-1) x^p |y|^{p-2} at
    the current iterate, solves the resulting tridiagonal M-matrix system and
    clips the result into [w2, 1].

    Raises:
        NoConvergence: no fixed point within ``max_iter`` sweeps.
    """
    grid = Grid(a=0.0, b=R, n=n)
    x, h = grid.nodes, grid.h
    lower = subsolution(x)
    upper = np.ones_like(x)
    y = lower.copy()
    y[0] = 1.0

    for sweep in range(1, max_iter + 1):
        cell = np.maximum(np.abs(np.diff(y)) / h, SLOPE_FLOOR) ** (p - 2.0) / (h * h)
        reaction = (p - 1.0) * x[1:-1] ** p * np.abs(y[1:-1]) ** (p - 2.0)
        bands = np.zeros((3, n - 2))
        bands[0, 1:] = cell[1:-1]
        bands[1] = -(cell[:-1] + cell[1:]) - reaction
        bands[2, :-1] = cell[1:-1]
        rhs = np.zeros(n - 2)
        rhs[0] -= cell[0] * y[0]
        rhs[-1] -= cell[-1] * y[-1]
        interior = solve_banded((1, 1), bands, rhs)
        updated = y.copy()
        updated[1:-1] = np.clip(interior, lower[1:-1], upper[1:-1])
        change = float(np.max(np.abs(updated - y)))
        y = updated
        if change <= tol:
            logger.info("Perron relaxation converged", p=p, R=R, n=n, sweeps=sweep)
            return Profile(grid=grid, values=y)
    raise NoConvergence("Perron relaxation did not converge", p=p, R=R, sweeps=max_iter)
