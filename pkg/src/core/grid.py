"""Differences, quadrature and norms on uniform grids."""
from __future__ import annotations

import numpy as np

from models.schemas import Grid, Profile


def trapezoid_weights(n: int) -> np.ndarray:
    """Trapezoid weights without the factor h (1/2 at both ends, 1 inside)."""
    weights = np.ones(n)
    weights[0] = weights[-1] = 0.5
    return weights


def diff_forward(f: Profile) -> np.ndarray:
    """Cell values (f[i+1] - f[i]) / h, length n - 1."""
    return np.diff(f.values) / f.grid.h


def quad_trapezoid(f: Profile) -> float:
    """Trapezoid rule on the nodes of f's grid."""
    return float(f.grid.h * np.dot(trapezoid_weights(f.grid.n), f.values))


def quad_midpoint(g, h: float) -> float:
    """Rectangle rule on cell values."""
    return float(h * np.sum(np.asarray(g, dtype=float)))


def lp_norm(f: Profile, p: float) -> float:
    """(∫ |f|^p)^{1/p} with the trapezoid rule."""
    if p < 1:
        raise ValueError("lp_norm requires p >= 1")
    integral = quad_trapezoid(f.with_values(np.abs(f.values) ** p))
    return float(integral ** (1.0 / p))


def lp_norm_values(values: np.ndarray, h: float, p: float) -> float:
    """lp_norm on raw node values of a uniform grid."""
    integral = h * np.dot(trapezoid_weights(values.shape[0]), np.abs(values) ** p)
    return float(integral ** (1.0 / p))


def central_derivative(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Second-order derivative estimate at every node."""
    return np.gradient(values, grid.h, edge_order=2)
