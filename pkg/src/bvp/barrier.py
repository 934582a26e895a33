"""Upper barrier for V_R built from the weighted decaying solution."""
from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy.interpolate import PchipInterpolator

from ivp.shooting import scaled_decaying
from models.results import SolutionPair
from models.schemas import Grid, Profile, ScaledShootingSpec

BARRIER_SLOPE = 2.0


def barrier_weight(p: float) -> float:
    """beta of the comparison weight beta^p x^p: 1 for p >= 2, 1/(1 + 2^{1/(p-1)}) below."""
    return 1.0 if p >= 2 else 1.0 / (1.0 + 2.0 ** (1.0 / (p - 1.0)))


def barrier_profile(p: float, grid: Grid, *, step: float = 1e-3) -> Profile:
    """V̄ on the grid: decaying solution with slope -2 at 0, linear -2x + V̄(0) for x < 0."""
    far = max(10.0, grid.b)
    trajectory = scaled_decaying(
        ScaledShootingSpec(beta=barrier_weight(p), gamma=BARRIER_SLOPE), p, x_far=far, step=step
    )
    x = grid.nodes
    right = PchipInterpolator(trajectory.nodes, trajectory.y)(np.clip(x, 0.0, trajectory.x_end))
    values = np.where(x >= 0, right, trajectory.y[0] - BARRIER_SLOPE * x)
    return Profile(grid=grid, values=values)


def barrier_check(pair: SolutionPair, p: float, *, tol: float = 1e-6) -> Tuple[bool, float]:
    """Whether V_R <= V̄ + tol at every node, with the largest V_R - V̄."""
    barrier = barrier_profile(p, pair.grid)
    violation = float(np.max(pair.V.values - barrier.values))
    return violation <= tol, violation
