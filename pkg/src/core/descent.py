"""Variable-metric steepest descent helpers shared by the energy minimizers.

The metric is the tridiagonal Hessian of the regularized gradient term plus a
diagonal supplied by the caller; it is symmetric positive definite, so the
direction -M^{-1} g is a descent direction and the method stays first order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import structlog
from scipy.linalg import solveh_banded

from core.nonlinearity import phi_p_reg_slope
from models.errors import LineSearchFailure, MaxIterations
from models.results import StageRecord

logger = structlog.get_logger()

ARMIJO_C1 = 1e-4
MIN_STEP = 1e-12


@dataclass
class LineSearchStep:
    point: np.ndarray
    value: float
    step: float
    evaluations: int


def stiffness_bands(values: np.ndarray, h: float, p: float, eps: float) -> Tuple[np.ndarray, np.ndarray]:
    """Diagonal and superdiagonal of the gradient-term Hessian on interior nodes."""
    slopes = np.diff(values) / h
    cell = phi_p_reg_slope(slopes, p, eps) / h
    diag = cell[:-1] + cell[1:]
    off = -cell[1:-1]
    return diag, off


def solve_metric(diag: np.ndarray, off: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve M x = rhs for the symmetric tridiagonal M given by its bands."""
    bands = np.zeros((2, diag.size))
    bands[0, 1:] = off
    bands[1] = diag
    return solveh_banded(bands, rhs)


def armijo_backtrack(
    fun: Callable[[np.ndarray], float],
    x: np.ndarray,
    direction: np.ndarray,
    value: float,
    slope: float,
    *,
    retract: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    c1: float = ARMIJO_C1,
    shrink: float = 0.5,
    min_step: float = MIN_STEP,
) -> Optional[LineSearchStep]:
    """Backtracking line search with the sufficient-decrease test.

    ``retract`` maps a trial point back to the feasible set before the energy
    is evaluated. Returns None when no step above ``min_step`` is accepted.
    Roundoff slack of a few ulps of ``value`` is tolerated.
    """
    slack = 16.0 * np.finfo(float).eps * max(1.0, abs(value))
    step = 1.0
    evaluations = 0
    while step >= min_step:
        trial = x + step * direction
        if retract is not None:
            trial = retract(trial)
        trial_value = fun(trial)
        evaluations += 1
        if np.isfinite(trial_value) and trial_value <= value + c1 * step * slope + slack:
            return LineSearchStep(point=trial, value=float(trial_value), step=step, evaluations=evaluations)
        step *= shrink
    return None


def stage_tolerance(eps: float, tol: float, final: bool) -> float:
    """Stationarity target of one regularization stage."""
    return tol if final else max(tol, eps)


def descend(
    x0: np.ndarray,
    *,
    energy: Callable[[np.ndarray], float],
    gradient: Callable[[np.ndarray], np.ndarray],
    direction: Callable[[np.ndarray, np.ndarray], np.ndarray],
    stationarity: Callable[[np.ndarray, np.ndarray], float],
    tol: float,
    max_iter: int,
    final: bool,
    eps: float,
    retract: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> Tuple[np.ndarray, StageRecord]:
    """Run one regularization stage of preconditioned descent.

    Stops when ``stationarity(x, g) <= tol``. On the final stage an exhausted
    budget raises MaxIterations and a failed line search raises
    LineSearchFailure; earlier stages log a warning and hand over the current
    iterate.
    """
    x = x0.copy()
    value = energy(x)
    energies = [value]
    norm = np.inf
    for iteration in range(max_iter + 1):
        g = gradient(x)
        norm = stationarity(x, g)
        if norm <= tol:
            return x, StageRecord(eps=eps, iterations=iteration, grad_norm=norm, energies=energies)
        if iteration == max_iter:
            break
        d = direction(x, g)
        slope = float(np.dot(g, d))
        if not slope < 0:
            d, slope = -g, -float(np.dot(g, g))
        step = armijo_backtrack(energy, x, d, value, slope, retract=retract)
        if step is None:
            record = StageRecord(eps=eps, iterations=iteration, grad_norm=norm, energies=energies)
            if final:
                raise LineSearchFailure("no sufficient decrease", eps=eps, iteration=iteration, grad_norm=norm)
            if norm > 10.0 * tol:
                logger.warning("Line search stalled before final stage", eps=eps, grad_norm=norm)
            return x, record
        x, value = step.point, step.value
        energies.append(value)
        if iteration % 500 == 0:
            logger.debug("Descent progress", eps=eps, iteration=iteration, energy=value, grad_norm=norm)

    record = StageRecord(eps=eps, iterations=max_iter, grad_norm=norm, energies=energies)
    if final:
        raise MaxIterations("descent hit the iteration cap", eps=eps, iterations=max_iter, grad_norm=norm)
    logger.warning("Stage iteration cap reached", eps=eps, grad_norm=norm)
    return x, record
