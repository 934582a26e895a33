"""Discrete energy of the limit system and its exact gradient.

    E(U, V) = (1/p) Σ_cells h (g^2 + eps^2)^{p/2}  for both components
            + (kappa/p) Σ_nodes w h |U|^p |V|^p     (trapezoid weights w)

The symmetric energy ties V to the reflection of U.
"""
from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from core.grid import trapezoid_weights
from core.nonlinearity import phi_p, phi_p_reg
from models.schemas import Profile


def gradient_term(values: np.ndarray, h: float, p: float, eps: float) -> float:
    slopes = np.diff(values) / h
    return float(h / p * np.sum(np.power(slopes * slopes + eps * eps, 0.5 * p)))


def gradient_term_grad(values: np.ndarray, h: float, p: float, eps: float) -> np.ndarray:
    """Derivative of :func:`gradient_term` with zero boundary entries."""
    flux = phi_p_reg(np.diff(values) / h, p, eps)
    out = np.zeros_like(values)
    out[1:-1] = flux[:-1] - flux[1:]
    return out


def pair_energy(u: np.ndarray, v: np.ndarray, h: float, p: float, eps: float, kappa: float) -> float:
    weights = trapezoid_weights(u.shape[0])
    coupling = kappa / p * h * np.dot(weights, np.abs(u) ** p * np.abs(v) ** p)
    return gradient_term(u, h, p, eps) + gradient_term(v, h, p, eps) + float(coupling)


def pair_gradient(
    u: np.ndarray, v: np.ndarray, h: float, p: float, eps: float, kappa: float
) -> Tuple[np.ndarray, np.ndarray]:
    weights = trapezoid_weights(u.shape[0]) * h * kappa
    grad_u = gradient_term_grad(u, h, p, eps)
    grad_v = gradient_term_grad(v, h, p, eps)
    grad_u[1:-1] += weights[1:-1] * phi_p(u[1:-1], p) * np.abs(v[1:-1]) ** p
    grad_v[1:-1] += weights[1:-1] * phi_p(v[1:-1], p) * np.abs(u[1:-1]) ** p
    return grad_u, grad_v


def coupling_curvature(u: np.ndarray, v: np.ndarray, h: float, p: float, eps: float, kappa: float) -> np.ndarray:
    """Regularized second derivative of the coupling term in u, interior nodes."""
    ui, vi = u[1:-1], v[1:-1]
    return kappa * h * (p - 1.0) * np.power(ui * ui + eps * eps, 0.5 * (p - 2.0)) * np.abs(vi) ** p


def default_coupling(p: float, coupling: Optional[float]) -> float:
    return p - 1.0 if coupling is None else coupling


def energy_limit(U: Profile, p: float, eps: float, coupling: Optional[float] = None) -> float:
    """Energy of (U, U(-x)) on a symmetric grid."""
    u = U.values
    return pair_energy(u, u[::-1], U.grid.h, p, eps, default_coupling(p, coupling))


def energy_gradient(U: Profile, p: float, eps: float, coupling: Optional[float] = None) -> Profile:
    """Gradient of :func:`energy_limit` in the interior values of U.

    Each node collects its own term and the term of the mirrored V node.
    """
    u = U.values
    grad_u, grad_v = pair_gradient(u, u[::-1], U.grid.h, p, eps, default_coupling(p, coupling))
    return U.with_values(grad_u + grad_v[::-1])


def energy_free(U: Profile, V: Profile, p: float, eps: float, coupling: Optional[float] = None) -> float:
    return pair_energy(U.values, V.values, U.grid.h, p, eps, default_coupling(p, coupling))


def energy_free_gradient(
    U: Profile, V: Profile, p: float, eps: float, coupling: Optional[float] = None
) -> Tuple[Profile, Profile]:
    grad_u, grad_v = pair_gradient(U.values, V.values, U.grid.h, p, eps, default_coupling(p, coupling))
    return U.with_values(grad_u), V.with_values(grad_v)
