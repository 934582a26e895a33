"""Discrete energy of the Λ system on ]a, b[.

    E = (1/p) Σ_cells h (g^2 + eps^2)^{p/2}          for u and v
      + α/(p+2) Σ w h |u|^{p+2} + β/(p+2) Σ w h |v|^{p+2}
      + (Λ/p) Σ w h |u|^p |v|^p
"""
from __future__ import annotations

from typing import Tuple

import numpy as np

from bvp.energy import gradient_term, gradient_term_grad
from core.grid import trapezoid_weights
from core.nonlinearity import phi_p
from models.schemas import LambdaParams, Profile


def lambda_energy_values(u: np.ndarray, v: np.ndarray, h: float, params: LambdaParams, eps: float) -> float:
    p = params.p
    weights = trapezoid_weights(u.shape[0]) * h
    au, av = np.abs(u), np.abs(v)
    local = (
        params.alpha / (p + 2.0) * au ** (p + 2.0)
        + params.beta / (p + 2.0) * av ** (p + 2.0)
        + params.Lambda / p * au**p * av**p
    )
    return gradient_term(u, h, p, eps) + gradient_term(v, h, p, eps) + float(np.dot(weights, local))


def lambda_gradient_values(
    u: np.ndarray, v: np.ndarray, h: float, params: LambdaParams, eps: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Exact gradient in the node values; boundary entries are zero."""
    p = params.p
    weights = trapezoid_weights(u.shape[0])[1:-1] * h
    ui, vi = u[1:-1], v[1:-1]
    grad_u = gradient_term_grad(u, h, p, eps)
    grad_v = gradient_term_grad(v, h, p, eps)
    grad_u[1:-1] += weights * (
        params.alpha * phi_p(ui, p + 2.0) + params.Lambda * phi_p(ui, p) * np.abs(vi) ** p
    )
    grad_v[1:-1] += weights * (
        params.beta * phi_p(vi, p + 2.0) + params.Lambda * phi_p(vi, p) * np.abs(ui) ** p
    )
    return grad_u, grad_v


def local_curvature(
    u: np.ndarray, v: np.ndarray, h: float, params: LambdaParams, eps: float, weight: float
) -> np.ndarray:
    """Regularized second derivative in u of the local terms at interior nodes.

    ``weight`` is the α or β belonging to u.
    """
    p = params.p
    ui, vi = u[1:-1], v[1:-1]
    weights = trapezoid_weights(u.shape[0])[1:-1] * h
    return weights * (
        weight * (p + 1.0) * np.abs(ui) ** p
        + params.Lambda * (p - 1.0) * np.power(ui * ui + eps * eps, 0.5 * (p - 2.0)) * np.abs(vi) ** p
    )


def energy_lambda(u: Profile, v: Profile, params: LambdaParams, eps: float) -> float:
    if u.grid != v.grid:
        raise ValueError("u and v must share a grid")
    return lambda_energy_values(u.values, v.values, u.grid.h, params, eps)


def energy_lambda_gradient(u: Profile, v: Profile, params: LambdaParams, eps: float) -> Tuple[Profile, Profile]:
    if u.grid != v.grid:
        raise ValueError("u and v must share a grid")
    grad_u, grad_v = lambda_gradient_values(u.values, v.values, u.grid.h, params, eps)
    return u.with_values(grad_u), v.with_values(grad_v)
