"""Pointwise diagnostics of a limit pair: first integral, symmetry, shape, asymptotics."""
from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from core.grid import central_derivative
from models.errors import WindowEmpty, WindowTooSmall
from models.results import AsymptoticsReport, LimitsReport, MonotonicityReport, SolutionPair
from models.schemas import Profile

POSITIVE_GUARD = 1e-300


def first_integral(pair: SolutionPair, window: Optional[float] = None) -> Tuple[Profile, float, float]:
    """F = |U'|^p + |V'|^p - (kappa/(p-1)) U^p V^p with central differences.

    The level is the median of F over |x| <= window (default R/2); the drift
    is the largest relative deviation from it over interior nodes of the
    same window.
    """
    p, x = pair.p, pair.x
    U, V = pair.U.values, pair.V.values
    dU = central_derivative(U, pair.grid)
    dV = central_derivative(V, pair.grid)
    factor = pair.coupling / (p - 1.0)
    F = np.abs(dU) ** p + np.abs(dV) ** p - factor * np.abs(U) ** p * np.abs(V) ** p

    half = pair.R / 2.0 if window is None else window
    mask = np.abs(x) <= half + 1e-12 * pair.R
    level = float(np.median(F[mask]))
    mask[0] = mask[-1] = False
    drift = float(np.max(np.abs(F[mask] - level))) / max(abs(level), 1e-12) if mask.any() else 0.0
    return pair.U.with_values(F), level, drift


def symmetry_defect(pair: SolutionPair) -> float:
    return float(np.max(np.abs(pair.V.values - pair.U.values[::-1])))


def monotonicity_report(pair: SolutionPair) -> MonotonicityReport:
    U, V = pair.U.values, pair.V.values
    dU = central_derivative(U, pair.grid)
    dV = central_derivative(V, pair.grid)
    return MonotonicityReport(
        u_increasing=bool(np.all(np.diff(U) >= -1e-8)),
        v_decreasing=bool(np.all(np.diff(V) <= 1e-8)),
        u_convex=bool(np.all(np.diff(U, 2) >= -1e-6)),
        max_gradient_sum=float(np.max(np.abs(dU) + np.abs(dV))),
    )


def asymptote_fit(pair: SolutionPair, *, tol: float = 1e-6) -> AsymptoticsReport:
    """Slope and intercepts on [R/2, R-1] and its mirror.

    Raises:
        WindowTooSmall: fewer than three nodes in either window.
    """
    x, R, p = pair.x, pair.R, pair.p
    right = (x >= R / 2.0) & (x <= R - 1.0)
    left = (x <= -R / 2.0) & (x >= -(R - 1.0))
    if right.sum() < 3 or left.sum() < 3:
        raise WindowTooSmall("asymptote window needs R > 2 and three nodes", R=R, nodes=int(right.sum()))

    U, V = pair.U.values, pair.V.values
    dU = central_derivative(U, pair.grid)
    dV = central_derivative(V, pair.grid)
    slope_right = float(np.mean(dU[right]))
    b1 = float(np.mean(U[right] - slope_right * x[right]))
    slope_left = float(np.mean(dV[left]))
    b2 = float(np.mean(V[left] - slope_left * x[left]))

    _, level, _ = first_integral(pair)
    gap = U[right] - max(level, 0.0) ** (1.0 / p) * x[right]
    monotone = bool(np.all(np.diff(gap) <= tol) and np.all(gap >= b1 - tol))
    return AsymptoticsReport(
        slope_right=slope_right,
        b1_hat=b1,
        b2_hat=b2,
        monotone_approach=monotone,
        window_nodes=int(right.sum()),
    )


def gaussian_decay_fit(pair: SolutionPair, window: Tuple[float, float] = (-6.0, -3.0)) -> AsymptoticsReport:
    """Least-squares fit of log U against x^2 on a far-left window.

    Raises:
        WindowEmpty: fewer than three positive nodes in the window.
    """
    lo, hi = window
    x, U = pair.x, pair.U.values
    mask = (x >= lo) & (x <= hi) & (U > POSITIVE_GUARD)
    if mask.sum() < 3:
        raise WindowEmpty("no positive nodes in decay window", window=window)

    xs, us = x[mask], U[mask]
    squares, logs = xs**2, np.log(us)
    slope, intercept = np.polyfit(squares, logs, 1)
    fitted = intercept + slope * squares
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    ss_res = float(np.sum((logs - fitted) ** 2))
    r_squared = max(0.0, 1.0 - ss_res / ss_tot) if ss_tot > 0 else 0.0

    rates = (intercept - logs) / squares
    k_hat, K_hat = float(rates.min()), float(rates.max())
    ratios = central_derivative(U, pair.grid)[mask] / (np.abs(xs) * us)
    return AsymptoticsReport(
        decay_rate=float(-slope),
        k_hat=k_hat,
        K_hat=K_hat,
        m_hat=float(np.min(us / np.exp(fitted - intercept))),
        M_hat=float(np.max(us / np.exp(fitted - intercept))),
        c_hat=float(ratios.min()),
        C_hat=float(ratios.max()),
        r_squared=r_squared,
        window_nodes=int(mask.sum()),
    )


def limits_report(pair: SolutionPair, threshold: float = 1e-3, nodes: int = 5) -> LimitsReport:
    """Vanishing quantities at the leftmost interior nodes and their mirrors on the right."""
    p, n = pair.p, pair.grid.n
    U, V = np.abs(pair.U.values), np.abs(pair.V.values)
    dU = central_derivative(pair.U.values, pair.grid)
    dV = central_derivative(pair.V.values, pair.grid)
    left = slice(1, 1 + nodes)
    right = slice(n - 1 - nodes, n - 1)
    mixed_v = U ** (p - 1.0) * V**p
    mixed_u = U**p * V ** (p - 1.0)
    values = {
        "U^(p-1)V^p left": float(np.max(mixed_v[left])),
        "U^pV^(p-1) left": float(np.max(mixed_u[left])),
        "U left": float(np.max(U[left])),
        "U' left": float(np.max(np.abs(dU[left]))),
        "U^(p-1)V^p right": float(np.max(mixed_v[right])),
        "U^pV^(p-1) right": float(np.max(mixed_u[right])),
        "V right": float(np.max(V[right])),
        "V' right": float(np.max(np.abs(dV[right]))),
    }
    return LimitsReport(values=values, threshold=threshold)
