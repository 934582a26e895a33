"""Picard fixed-point iteration on short windows.

The map is
    T(y)(x) = y0 + ∫_{x0}^x phi_p_inv( phi_p(y1) + ∫_{x0}^t (p-1) s^p phi_p(y(s)) ds ) dt
evaluated with nested trapezoid quadrature.
"""
from __future__ import annotations

import math
from typing import Tuple

import numpy as np
import structlog
from scipy.integrate import cumulative_trapezoid

from core.nonlinearity import phi_p, phi_p_inv
from models.errors import NoContraction, NoConvergence
from models.schemas import Grid, IvpSpec, Profile

logger = structlog.get_logger()

INITIAL_DELTA = 0.5
MIN_DELTA = 1e-8
MIN_WINDOW_NODES = 51
BAD_RATIO_LIMIT = 3


def _apply(values: np.ndarray, x: np.ndarray, spec: IvpSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Return T(y) and the inner flux z = phi_p(y') it implies."""
    p = spec.p
    source = (p - 1.0) * np.power(x, p) * phi_p(values, p)
    z = phi_p(spec.y1, p) + cumulative_trapezoid(source, x, initial=0.0)
    image = spec.y0 + cumulative_trapezoid(phi_p_inv(z, p), x, initial=0.0)
    return image, z


def picard_map(y: Profile, spec: IvpSpec) -> Profile:
    """One application of the Picard map on y's grid; the window starts at y.grid.a."""
    image, _ = _apply(y.values, y.grid.nodes, spec)
    return y.with_values(image)


def window_grid(x0: float, delta: float, step: float) -> Grid:
    n = max(int(math.ceil(delta / step)), MIN_WINDOW_NODES - 1) + 1
    return Grid(a=x0, b=x0 + delta, n=n)


def picard_solve_local(
    spec: IvpSpec,
    delta: float,
    *,
    max_iter: int = 200,
) -> Tuple[Profile, int, float]:
    """Iterate the Picard map on [x0, x0 + delta] to a sup-norm fixed point.

    Returns the fixed point, the iteration count and the largest observed
    ratio of successive updates.

    Raises:
        NoContraction: the update ratio stayed >= 1 for three iterations.
        NoConvergence: ``max_iter`` iterations without reaching ``spec.tol``.
    """
    grid = window_grid(spec.x0, delta, spec.step)
    if spec.y0 == 0 and spec.y1 == 0:
        return Profile.zeros(grid), 1, 0.0

    x = grid.nodes
    current = spec.y0 + spec.y1 * (x - spec.x0)
    previous_diff = None
    ratio_max = 0.0
    bad = 0
    for iteration in range(1, max_iter + 1):
        image, _ = _apply(current, x, spec)
        diff = float(np.max(np.abs(image - current)))
        floor = 1e3 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(image))))
        if previous_diff is not None and previous_diff > floor:
            ratio = diff / previous_diff
            ratio_max = max(ratio_max, ratio)
            bad = bad + 1 if ratio >= 1.0 else 0
            if bad >= BAD_RATIO_LIMIT:
                raise NoContraction("Picard map is not contracting", delta=delta, ratio=ratio)
        current = image
        if diff <= spec.tol:
            return Profile(grid=grid, values=current), iteration, ratio_max
        previous_diff = diff
    raise NoConvergence("Picard iteration did not reach tolerance", delta=delta, iterations=max_iter)


def picard_window(
    spec: IvpSpec,
    *,
    delta: float = INITIAL_DELTA,
) -> Tuple[Profile, np.ndarray, float]:
    """Solve on the largest contracting window, halving delta from ``delta``.

    Returns the window profile, its slopes and the delta used.
    """
    delta = min(delta, spec.x_max - spec.x0)
    while True:
        try:
            solution, iterations, ratio = picard_solve_local(spec, delta)
            break
        except (NoContraction, NoConvergence) as exc:
            logger.debug("Picard window rejected", delta=delta, reason=type(exc).__name__)
            delta *= 0.5
            if delta < MIN_DELTA:
                raise
    _, z = _apply(solution.values, solution.grid.nodes, spec)
    logger.debug("Picard window converged", x0=spec.x0, delta=delta, iterations=iterations, ratio=ratio)
    return solution, phi_p_inv(z, spec.p), delta
