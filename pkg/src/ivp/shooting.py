"""Shooting for the positive decaying solution and its scaled variant."""
from __future__ import annotations

import math
from typing import Tuple

import numpy as np
import structlog

from core.nonlinearity import phi_p_inv
from ivp.integrator import GROWTH_GUARD, integrate_regular, make_event
from models.errors import BracketInvalid, NoConvergence
from models.results import Trajectory, TrajectoryStatus
from models.schemas import ScaledShootingSpec

logger = structlog.get_logger()

CROSSES = "crosses"
TURNS = "turns"
DECAYS = "decays"
SEPARATION = 1e-3


def _shot(p: float, y0: float, y1: float, x_limit: float, tol: float):
    crossing = make_event(lambda x, s: s[0], -1)
    turning = make_event(lambda x, s: s[1], 1)
    overflow = make_event(lambda x, s: abs(s[0]) - GROWTH_GUARD, 1)
    return integrate_regular(p, 0.0, y0, y1, x_limit, tol=tol, events=(crossing, turning, overflow))


def classify(sol) -> str:
    """Which side of the decaying solution a shot lies on."""
    if sol.t_events[0].size:
        return CROSSES
    if sol.t_events[1].size:
        return TURNS
    y_end, z_end = sol.y[0, -1], sol.y[1, -1]
    if y_end <= 0:
        return CROSSES
    if z_end >= 0 or sol.t_events[2].size:
        return TURNS
    return DECAYS


def shoot_decaying(
    p: float,
    y1: float,
    x_far: float = 10.0,
    bracket: Tuple[float, float] = (1e-2, 1e2),
    *,
    tol: float = 1e-10,
    step: float = 1e-3,
    decay_floor: float = 1e-3,
    max_iter: int = 200,
) -> Tuple[float, Trajectory]:
    """Find y0* > 0 whose solution with y'(0) = y1 < 0 stays positive and decays.

    Bisection on y0: shots that cross zero are below y0*, shots that turn
    upward are above it. The returned trajectory follows the y0* shot up to
    the point where the bracket ends separate by more than SEPARATION
    (relative) and continues with the Gaussian tail matched in value and
    slope there; ``resolved_to`` marks the switch.

    Raises:
        BracketInvalid: the bracket ends do not classify as (crosses, turns).
        NoConvergence: the trajectory is still above ``decay_floor`` at x_far.
    """
    if y1 >= 0:
        raise ValueError("shooting requires a negative initial slope")
    x_limit = max(2.0 * x_far, 20.0)
    lo, hi = bracket
    lo_label = classify(_shot(p, lo, y1, x_limit, tol))
    hi_label = classify(_shot(p, hi, y1, x_limit, tol))
    if lo_label != CROSSES or hi_label != TURNS:
        raise BracketInvalid("bracket does not enclose the decaying solution", lo=lo, hi=hi,
                             lo_label=lo_label, hi_label=hi_label)

    iterations = 0
    while hi - lo > tol * hi and iterations < max_iter:
        iterations += 1
        mid = 0.5 * (lo + hi)
        label = classify(_shot(p, mid, y1, x_limit, tol))
        if label == CROSSES:
            lo = mid
        elif label == TURNS:
            hi = mid
        else:
            lo = hi = mid
    y_star = 0.5 * (lo + hi)
    logger.info("Decaying shot bracketed", p=p, y1=y1, y0=y_star, iterations=iterations)

    shots = [_shot(p, value, y1, x_far, tol) for value in (lo, hi, y_star)]
    reach = min(float(sol.t[-1]) for sol in shots)
    nodes = np.append(step * np.arange(int(np.floor(x_far / step))), x_far)
    nodes = np.unique(nodes)
    inside = nodes[nodes <= reach]
    y_lo, y_hi = shots[0].sol(inside)[0], shots[1].sol(inside)[0]
    state = shots[2].sol(inside)
    y, z = state[0], state[1]
    bad = (y_hi - y_lo > SEPARATION * np.abs(y_hi)) | (y <= 0) | (z >= 0)
    bad[0] = False
    cut = int(np.argmax(bad)) if np.any(bad) else inside.size
    cut = max(cut, 2)
    resolved_x, resolved_y = inside[:cut], y[:cut]
    resolved_dy = np.asarray(phi_p_inv(z[:cut], p), dtype=float)

    x_s, y_s, dy_s = float(resolved_x[-1]), float(resolved_y[-1]), float(resolved_dy[-1])
    tail_x = nodes[nodes > x_s]
    if tail_x.size:
        rate = -dy_s / (2.0 * x_s * y_s)
        if not (rate > 0 and math.isfinite(rate)):
            raise NoConvergence("cannot continue decaying tail", x=x_s, y=y_s, dy=dy_s)
        tail_y = y_s * np.exp(-rate * (tail_x**2 - x_s**2))
        tail_dy = -2.0 * rate * tail_x * tail_y
        nodes_all = np.concatenate([resolved_x, tail_x])
        y_all = np.concatenate([resolved_y, tail_y])
        dy_all = np.concatenate([resolved_dy, tail_dy])
    else:
        nodes_all, y_all, dy_all = resolved_x, resolved_y, resolved_dy

    if y_all[-1] > decay_floor:
        raise NoConvergence("decaying solution above floor at x_far", x_far=x_far, value=float(y_all[-1]))
    trajectory = Trajectory(
        nodes=nodes_all,
        y=y_all,
        dy=dy_all,
        status=TrajectoryStatus.REACHED_XMAX,
        resolved_to=x_s,
    )
    return y_star, trajectory


def scaled_decaying(
    spec: ScaledShootingSpec,
    p: float,
    *,
    x_far: float = 10.0,
    tol: float = 1e-10,
    step: float = 1e-3,
    decay_floor: float = 1e-3,
) -> Trajectory:
    """Decaying solution of |W'|^{p-2} W'' = beta^p x^p W^{p-1} with W'(0) = -gamma.

    Built from the unit solution W (W'(0) = -1) as
    x -> (gamma / sqrt(beta)) W(sqrt(beta) x).
    """
    root = math.sqrt(spec.beta)
    _, unit = shoot_decaying(
        p, -1.0, x_far * root, tol=tol, step=step * root, decay_floor=decay_floor * root / spec.gamma
    )
    resolved = unit.resolved_to / root if unit.resolved_to is not None else None
    return Trajectory(
        nodes=unit.nodes / root,
        y=spec.gamma / root * unit.y,
        dy=spec.gamma * unit.dy,
        status=unit.status,
        resolved_to=resolved,
    )
