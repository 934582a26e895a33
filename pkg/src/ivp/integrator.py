"""Adaptive integration of |y'|^{p-2} y'' = x^p |y|^{p-2} y from initial data.

Away from flat slopes the equation is integrated as the first-order system
    y' = phi_p_inv(z),  z' = (p-1) x^p phi_p(y)
with scipy's DOP853; where |y'| falls below SLOPE_SWITCH the solution is
advanced by Picard windows instead.
"""
from __future__ import annotations

from typing import Callable, List, Sequence

import numpy as np
import structlog
from scipy.integrate import solve_ivp

from core.nonlinearity import phi_p, phi_p_inv
from ivp.picard import picard_window
from models.errors import StepUnderflow
from models.results import Trajectory, TrajectoryStatus
from models.schemas import IvpSpec

logger = structlog.get_logger()

SLOPE_SWITCH = 1e-6
GROWTH_GUARD = 1e15


def first_order_rhs(p: float) -> Callable[[float, np.ndarray], List[float]]:
    def rhs(x: float, state: np.ndarray) -> List[float]:
        return [phi_p_inv(state[1], p), (p - 1.0) * x**p * phi_p(state[0], p)]

    return rhs


def make_event(fn: Callable[[float, np.ndarray], float], direction: int) -> Callable:
    fn.terminal = True
    fn.direction = direction
    return fn


def integrate_regular(
    p: float,
    x_start: float,
    y: float,
    dy: float,
    x_end: float,
    *,
    tol: float,
    events: Sequence[Callable] = (),
    min_step: float = 0.0,
):
    """Run DOP853 on (y, phi_p(y')) with dense output.

    The closing step may be cut short by x_end or a terminal event; every
    earlier accepted step must be at least ``min_step``.

    Raises:
        StepUnderflow: the integrator could not advance.
    """
    sol = solve_ivp(
        first_order_rhs(p),
        (x_start, x_end),
        [y, phi_p(dy, p)],
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-4,
        events=list(events) or None,
        dense_output=True,
    )
    if sol.status == -1:
        raise StepUnderflow("integrator step underflow", x=float(sol.t[-1]), message=sol.message)
    steps = np.diff(sol.t)[:-1]
    if steps.size and float(np.min(steps)) < min_step:
        at = int(np.argmin(steps))
        raise StepUnderflow("adaptive step below floor", x=float(sol.t[at]), step=float(steps[at]), floor=min_step)
    return sol


def sample_segment(sol, p: float, step: float):
    """Nodes spaced by ``step`` after the segment start, ending at the segment end."""
    x_start, x_end = float(sol.t[0]), float(sol.t[-1])
    count = int(np.floor((x_end - x_start) / step))
    nodes = x_start + step * np.arange(1, count + 1)
    nodes = nodes[nodes < x_end - 1e-3 * step]
    states = sol.sol(nodes) if nodes.size else np.empty((2, 0))
    nodes = np.append(nodes, x_end)
    y = np.append(states[0], sol.y[0, -1])
    dy = phi_p_inv(np.append(states[1], sol.y[1, -1]), p)
    return nodes, y, np.asarray(dy, dtype=float)


def ivp_solve(
    spec: IvpSpec,
    *,
    slope_switch: float = SLOPE_SWITCH,
    guard: float = GROWTH_GUARD,
) -> Trajectory:
    """Integrate from (x0, y0, y1) to x_max, chaining regular segments and Picard windows."""
    p = spec.exponent.p
    span = spec.x_max - spec.x0
    if spec.y0 == 0 and spec.y1 == 0:
        nodes = np.linspace(spec.x0, spec.x_max, max(int(np.ceil(span / spec.step)), 1) + 1)
        zeros = np.zeros_like(nodes)
        return Trajectory(nodes=nodes, y=zeros, dy=zeros, status=TrajectoryStatus.IDENTICALLY_ZERO)

    slope_level = phi_p(slope_switch, p)
    flat = make_event(lambda x, s: abs(s[1]) - slope_level, -1)
    overflow = make_event(lambda x, s: abs(s[0]) - guard, 1)

    xs = [np.array([spec.x0])]
    ys = [np.array([spec.y0])]
    dys = [np.array([spec.y1])]
    status = None
    stalled = False
    x, y, dy = spec.x0, spec.y0, spec.y1
    while x < spec.x_max - 1e-12 * span:
        if y == 0 and dy == 0:
            nodes = np.linspace(x, spec.x_max, max(int(np.ceil((spec.x_max - x) / spec.step)), 1) + 1)[1:]
            xs.append(nodes)
            ys.append(np.zeros_like(nodes))
            dys.append(np.zeros_like(nodes))
            status = TrajectoryStatus.IDENTICALLY_ZERO
            break
        if abs(dy) < slope_switch or stalled:
            stalled = False
            local = spec.model_copy(update={"x0": x, "y0": y, "y1": dy})
            window, slopes, _ = picard_window(local)
            nodes, values = window.x[1:], window.values[1:]
            slopes = np.asarray(slopes)[1:]
            if np.any(np.abs(values) >= guard):
                keep = int(np.argmax(np.abs(values) >= guard))
                xs.append(nodes[:keep])
                ys.append(values[:keep])
                dys.append(slopes[:keep])
                status = TrajectoryStatus.BLOW_UP_DETECTED
                break
        else:
            sol = integrate_regular(
                p, x, y, dy, spec.x_max, tol=spec.tol, events=(flat, overflow), min_step=1e-12 * span
            )
            if sol.t[-1] - x <= 1e-12 * span:
                stalled = True
                continue
            nodes, values, slopes = sample_segment(sol, p, spec.step)
            if sol.t_events[1].size:
                xs.append(nodes)
                ys.append(values)
                dys.append(slopes)
                status = TrajectoryStatus.BLOW_UP_DETECTED
                break
        xs.append(nodes)
        ys.append(values)
        dys.append(slopes)
        x, y, dy = float(nodes[-1]), float(values[-1]), float(slopes[-1])

    nodes, values, slopes = np.concatenate(xs), np.concatenate(ys), np.concatenate(dys)
    if status is None:
        status = (
            TrajectoryStatus.SIGN_CLASSIFIED_NEGATIVE
            if np.max(values) <= 0
            else TrajectoryStatus.REACHED_XMAX
        )
    logger.debug("IVP solved", p=p, y0=spec.y0, y1=spec.y1, nodes=nodes.size, status=status.value)
    return Trajectory(nodes=nodes, y=values, dy=slopes, status=status)
