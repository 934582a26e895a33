"""Minimizers of the limit energy with Dirichlet data U(-R)=0, U(R)=R."""
from __future__ import annotations

from typing import List, Optional

import numpy as np
import structlog

from bvp.energy import coupling_curvature, pair_energy, pair_gradient
from core.descent import descend, solve_metric, stage_tolerance, stiffness_bands
from models.errors import WindowTooSmall
from models.results import SolutionPair, StageRecord
from models.schemas import Grid, LimitProblem, Profile
from verify.diagnostics import asymptote_fit, first_integral

logger = structlog.get_logger()


def _boundary(u: np.ndarray, R: float) -> np.ndarray:
    u[0], u[-1] = 0.0, R
    return u


def minimize_limit(prob: LimitProblem, *, initial: Optional[Profile] = None) -> SolutionPair:
    """Minimize the limit energy over U with V(x) = U(-x).

    Starts from U = x^+ (or ``initial``) and converges at every eps of the
    schedule, warm-starting the next one. Stationarity is sup |grad E| / h.

    Raises:
        MaxIterations: iteration cap reached at the final eps.
        LineSearchFailure: no sufficient decrease at the final eps.
    """
    if not prob.enforce_symmetry:
        return solve_free_pair(prob)

    grid = prob.grid
    x, h, p, kappa = grid.nodes, grid.h, prob.p, prob.kappa
    u = _boundary(np.maximum(x, 0.0) if initial is None else np.array(initial.values), prob.R)
    stages: List[StageRecord] = []

    for index, eps in enumerate(prob.eps_schedule):
        final = index == len(prob.eps_schedule) - 1

        def energy(w: np.ndarray, eps: float = eps) -> float:
            return pair_energy(w, w[::-1], h, p, eps, kappa)

        def gradient(w: np.ndarray, eps: float = eps) -> np.ndarray:
            grad_u, grad_v = pair_gradient(w, w[::-1], h, p, eps, kappa)
            return grad_u + grad_v[::-1]

        def direction(w: np.ndarray, g: np.ndarray, eps: float = eps) -> np.ndarray:
            diag, off = stiffness_bands(w, h, p, eps)
            reflected = w[::-1]
            curvature = coupling_curvature(w, reflected, h, p, eps, kappa)
            diag = 2.0 * diag + curvature + curvature + prob.metric_floor * h
            d = np.zeros_like(w)
            d[1:-1] = -solve_metric(diag, 2.0 * off, g[1:-1])
            return d

        u, record = descend(
            u,
            energy=energy,
            gradient=gradient,
            direction=direction,
            stationarity=lambda w, g: float(np.max(np.abs(g[1:-1]))) / h,
            tol=stage_tolerance(eps, prob.tol, final),
            max_iter=prob.max_iter,
            final=final,
            eps=eps,
            retract=np.abs,
        )
        stages.append(record)
        logger.info("Limit stage finished", p=p, R=prob.R, eps=eps, iterations=record.iterations,
                    grad_norm=record.grad_norm)

    U = Profile(grid=grid, values=u)
    return _finish(prob, grid, U, U.reflected(), stages)


def solve_free_pair(prob: LimitProblem) -> SolutionPair:
    """Minimize over U and V independently, V(-R)=R and V(R)=0.

    The start V = (R - x)^2 / (4R) is not the reflection of U = x^+, so any
    symmetry of the result comes from the energy.
    """
    grid = prob.grid
    x, h, n, p, kappa, R = grid.nodes, grid.h, grid.n, prob.p, prob.kappa, prob.R
    start = np.concatenate([np.maximum(x, 0.0), (R - x) ** 2 / (4.0 * R)])
    start[0], start[n - 1], start[n], start[-1] = 0.0, R, R, 0.0
    stages: List[StageRecord] = []

    for index, eps in enumerate(prob.eps_schedule):
        final = index == len(prob.eps_schedule) - 1

        def energy(w: np.ndarray, eps: float = eps) -> float:
            return pair_energy(w[:n], w[n:], h, p, eps, kappa)

        def gradient(w: np.ndarray, eps: float = eps) -> np.ndarray:
            return np.concatenate(pair_gradient(w[:n], w[n:], h, p, eps, kappa))

        def direction(w: np.ndarray, g: np.ndarray, eps: float = eps) -> np.ndarray:
            d = np.zeros_like(w)
            for own, other, offset in ((w[:n], w[n:], 0), (w[n:], w[:n], n)):
                diag, off = stiffness_bands(own, h, p, eps)
                diag = diag + coupling_curvature(own, other, h, p, eps, kappa) + prob.metric_floor * h
                d[offset + 1:offset + n - 1] = -solve_metric(diag, off, g[offset + 1:offset + n - 1])
            return d

        def stationarity(w: np.ndarray, g: np.ndarray) -> float:
            return max(float(np.max(np.abs(g[1:n - 1]))), float(np.max(np.abs(g[n + 1:-1])))) / h

        start, record = descend(
            start,
            energy=energy,
            gradient=gradient,
            direction=direction,
            stationarity=stationarity,
            tol=stage_tolerance(eps, prob.tol, final),
            max_iter=prob.max_iter,
            final=final,
            eps=eps,
            retract=np.abs,
        )
        stages.append(record)
        logger.info("Free pair stage finished", p=p, R=R, eps=eps, iterations=record.iterations,
                    grad_norm=record.grad_norm)

    return _finish(prob, grid, Profile(grid=grid, values=start[:n]), Profile(grid=grid, values=start[n:]), stages)


def _finish(prob: LimitProblem, grid: Grid, U: Profile, V: Profile, stages: List[StageRecord]) -> SolutionPair:
    eps = prob.exponent.eps
    pair = SolutionPair(
        grid=grid,
        U=U,
        V=V,
        p=prob.p,
        coupling=prob.kappa,
        grad_norm=stages[-1].grad_norm,
        energy=pair_energy(U.values, V.values, grid.h, prob.p, eps, prob.kappa),
        eps=eps,
        iterations=sum(stage.iterations for stage in stages),
        enforce_symmetry=prob.enforce_symmetry,
        stages=stages,
    )
    _, level, _ = first_integral(pair)
    update = {"T_inf": level}
    try:
        fit = asymptote_fit(pair)
        update.update(b1=fit.b1_hat, b2=fit.b2_hat)
    except WindowTooSmall:
        logger.warning("Interval too short for asymptote fit", R=prob.R)
    return pair.model_copy(update=update)
