"""Constrained minimization of the Λ energy on the unit L^p spheres."""
from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np
import structlog

from core.descent import descend, solve_metric, stage_tolerance, stiffness_bands
from core.grid import (
    central_derivative,
    lp_norm_values,
    quad_midpoint,
    quad_trapezoid,
    trapezoid_weights,
)
from core.nonlinearity import phi_p, phi_p_reg
from lambda_system.energy import lambda_energy_values, lambda_gradient_values, local_curvature
from models.results import LambdaSolution, StageRecord
from models.schemas import Grid, LambdaParams, Profile

logger = structlog.get_logger()

BUMP_CENTERS = (0.3, 0.7)
BUMP_WIDTH = 0.15


def initial_bumps(grid: Grid, p: float) -> Tuple[np.ndarray, np.ndarray]:
    """Normalized left and right bumps vanishing at both ends."""
    x, a, b = grid.nodes, grid.a, grid.b
    bumps = []
    for fraction in BUMP_CENTERS:
        center = a + fraction * (b - a)
        bump = (x - a) * (b - x) * np.exp(-(((x - center) / (BUMP_WIDTH * (b - a))) ** 2))
        bump[0] = bump[-1] = 0.0
        bumps.append(_normalize(bump, grid.h, p))
    return bumps[0], bumps[1]


def _normalize(values: np.ndarray, h: float, p: float) -> np.ndarray:
    values = np.abs(values)
    return values / lp_norm_values(values, h, p)


def _normal(values: np.ndarray, h: float, p: float) -> np.ndarray:
    """Gradient of the discrete ∫|u|^p at interior nodes."""
    return p * h * trapezoid_weights(values.shape[0])[1:-1] * phi_p(values[1:-1], p)


def _projected(g: np.ndarray, normal: np.ndarray) -> np.ndarray:
    return g - (np.dot(g, normal) / np.dot(normal, normal)) * normal


def minimize_lambda(
    params: LambdaParams, *, initial: Optional[Tuple[np.ndarray, np.ndarray]] = None
) -> LambdaSolution:
    """Minimize E_Λ subject to ||u||_p = ||v||_p = 1 with u, v >= 0 and zero end values.

    Each step follows the metric gradient projected onto the tangent space of
    both constraints, then renormalizes. Multipliers and T_Λ are filled in on
    the way out.

    Raises:
        MaxIterations: iteration cap reached at the final eps.
        LineSearchFailure: no sufficient decrease at the final eps.
    """
    grid = params.grid
    n, h, p = grid.n, grid.h, params.p
    if initial is None:
        u0, v0 = initial_bumps(grid, p)
    else:
        u0, v0 = (_normalize(np.array(part, dtype=float), h, p) for part in initial)
        u0[0] = u0[-1] = v0[0] = v0[-1] = 0.0
    state = np.concatenate([u0, v0])
    stages: List[StageRecord] = []

    def retract(w: np.ndarray) -> np.ndarray:
        w = np.abs(w)
        w[0] = w[n - 1] = w[n] = w[-1] = 0.0
        return np.concatenate([_normalize(w[:n], h, p), _normalize(w[n:], h, p)])

    for index, eps in enumerate(params.eps_schedule):
        final = index == len(params.eps_schedule) - 1

        def energy(w: np.ndarray, eps: float = eps) -> float:
            return lambda_energy_values(w[:n], w[n:], h, params, eps)

        def gradient(w: np.ndarray, eps: float = eps) -> np.ndarray:
            return np.concatenate(lambda_gradient_values(w[:n], w[n:], h, params, eps))

        def direction(w: np.ndarray, g: np.ndarray, eps: float = eps) -> np.ndarray:
            d = np.zeros_like(w)
            parts = ((w[:n], w[n:], params.alpha, 0), (w[n:], w[:n], params.beta, n))
            for own, other, weight, offset in parts:
                diag, off = stiffness_bands(own, h, p, eps)
                diag = diag + local_curvature(own, other, h, params, eps, weight) + params.metric_floor * h
                normal = _normal(own, h, p)
                gi = g[offset + 1:offset + n - 1]
                metric_g = solve_metric(diag, off, gi)
                metric_n = solve_metric(diag, off, normal)
                sigma = np.dot(normal, metric_g) / np.dot(normal, metric_n)
                d[offset + 1:offset + n - 1] = -(metric_g - sigma * metric_n)
            return d

        def stationarity(w: np.ndarray, g: np.ndarray) -> float:
            gu = _projected(g[1:n - 1], _normal(w[:n], h, p))
            gv = _projected(g[n + 1:-1], _normal(w[n:], h, p))
            return max(float(np.max(np.abs(gu))), float(np.max(np.abs(gv)))) / h

        state, record = descend(
            state,
            energy=energy,
            gradient=gradient,
            direction=direction,
            stationarity=stationarity,
            tol=stage_tolerance(eps, params.tol, final),
            max_iter=params.max_iter,
            final=final,
            eps=eps,
            retract=retract,
        )
        stages.append(record)
        logger.info("Lambda stage finished", p=p, Lambda=params.Lambda, eps=eps,
                    iterations=record.iterations, grad_norm=record.grad_norm)

    eps = params.exponent.eps
    solution = LambdaSolution(
        params=params,
        u=Profile(grid=grid, values=state[:n]),
        v=Profile(grid=grid, values=state[n:]),
        grad_norm=stages[-1].grad_norm,
        energy=lambda_energy_values(state[:n], state[n:], h, params, eps),
        iterations=sum(stage.iterations for stage in stages),
        stages=stages,
    )
    lambda1, lambda2 = multipliers(solution, params)
    solution = solution.model_copy(update={"lambda1": lambda1, "lambda2": lambda2})
    _, level, drift = t_lambda_profile(solution, params)
    return solution.model_copy(update={"T_Lambda": level, "T_drift": drift})


def multipliers(sol: LambdaSolution, params: LambdaParams) -> Tuple[float, float]:
    """λ1 = ∫|u'|^p + α∫u^{p+2} + Λ∫u^p v^p and the mirrored λ2."""
    p, h = params.p, sol.u.grid.h
    u, v = np.abs(sol.u.values), np.abs(sol.v.values)
    overlap = quad_trapezoid(sol.u.with_values(u**p * v**p))
    lambda1 = (
        quad_midpoint(np.abs(np.diff(u) / h) ** p, h)
        + params.alpha * quad_trapezoid(sol.u.with_values(u ** (p + 2.0)))
        + params.Lambda * overlap
    )
    lambda2 = (
        quad_midpoint(np.abs(np.diff(v) / h) ** p, h)
        + params.beta * quad_trapezoid(sol.v.with_values(v ** (p + 2.0)))
        + params.Lambda * overlap
    )
    return float(lambda1), float(lambda2)


def t_lambda_profile(sol: LambdaSolution, params: LambdaParams) -> Tuple[Profile, float, float]:
    """Pointwise first integral of the Λ system, its median and relative drift.

        T = (p-1)(|u'|^p + |v'|^p) - Λ u^p v^p - pα u^{p+2}/(p+2) - pβ v^{p+2}/(p+2)
            + λ1 u^p + λ2 v^p
    """
    p = params.p
    u, v = np.abs(sol.u.values), np.abs(sol.v.values)
    du = central_derivative(u, sol.u.grid)
    dv = central_derivative(v, sol.v.grid)
    T = (
        (p - 1.0) * (np.abs(du) ** p + np.abs(dv) ** p)
        - params.Lambda * u**p * v**p
        - p * params.alpha * u ** (p + 2.0) / (p + 2.0)
        - p * params.beta * v ** (p + 2.0) / (p + 2.0)
        + sol.lambda1 * u**p
        + sol.lambda2 * v**p
    )
    level = float(np.median(T))
    drift = float(np.max(np.abs(T[1:-1] - level))) / max(abs(level), 1e-12)
    return sol.u.with_values(T), level, drift


def lambda_residual(sol: LambdaSolution, params: LambdaParams) -> float:
    """Sup-norm of the discrete Euler-Lagrange residual of both equations.

    Uses the regularized flux of the final eps and the recovered multipliers.
    """
    p, eps = params.exponent.p, params.exponent.eps
    h = sol.u.grid.h
    u, v = sol.u.values, sol.v.values
    worst = 0.0
    for own, other, weight, multiplier in ((u, v, params.alpha, sol.lambda1), (v, u, params.beta, sol.lambda2)):
        oi, xi = own[1:-1], other[1:-1]
        flux = phi_p_reg(np.diff(own) / h, p, eps)
        residual = (
            -np.diff(flux) / h
            + weight * phi_p(oi, p + 2.0)
            + params.Lambda * phi_p(oi, p) * np.abs(xi) ** p
            - multiplier * phi_p(oi, p)
        )
        worst = max(worst, float(np.max(np.abs(residual))))
    return worst
