"""Solves on growing intervals compared on a fixed window."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
import structlog
from scipy.interpolate import PchipInterpolator
from tqdm import tqdm

from bvp.solver import minimize_limit
from models.results import ContinuationReport, SolutionPair
from models.schemas import DEFAULT_EPS_SCHEDULE, Grid, LimitProblem, Profile
from verify.diagnostics import first_integral

logger = structlog.get_logger()


def warm_start(previous: SolutionPair, grid: Grid) -> Profile:
    """Previous U on the larger grid: interpolated inside, 0 on the left, x on the right."""
    x, R = grid.nodes, previous.R
    inside = PchipInterpolator(previous.x, previous.U.values)(np.clip(x, -R, R))
    values = np.where(x > R, x, np.where(x < -R, 0.0, inside))
    return Profile(grid=grid, values=np.maximum(values, 0.0))


def continue_in_R(
    p: float,
    R_list: Sequence[float],
    window: float,
    *,
    h: float = 0.02,
    tol: float = 1e-8,
    eps_schedule=DEFAULT_EPS_SCHEDULE,
    progress: bool = False,
) -> ContinuationReport:
    """Solve at every R, warm-started from the previous R, and restrict U to [-window, window].

    Reports sup-distances between successive restrictions, the margin
    min(U - x^+) on the window and the first-integral drift on the window.
    """
    R_values = [float(R) for R in R_list]
    if any(later <= earlier for earlier, later in zip(R_values, R_values[1:])):
        raise ValueError("R_list must be increasing")
    if not window < min(R_values):
        raise ValueError("window must be smaller than every R")

    points = int(round(window / h))
    xw = np.linspace(-window, window, 2 * points + 1)
    previous: Optional[np.ndarray] = None
    pair: Optional[SolutionPair] = None
    distances, margins, drifts = [], [], []
    for R in tqdm(R_values, desc="R continuation", disable=not progress):
        n = 2 * int(round(R / h)) + 1
        prob = LimitProblem(p=p, R=R, n=n, tol=tol, eps_schedule=tuple(eps_schedule))
        initial = warm_start(pair, prob.grid) if pair is not None else None
        pair = minimize_limit(prob, initial=initial)
        restricted = PchipInterpolator(pair.x, pair.U.values)(xw)
        if previous is not None:
            distances.append(float(np.max(np.abs(restricted - previous))))
        previous = restricted
        margins.append(float(np.min(restricted - np.maximum(xw, 0.0))))
        drifts.append(first_integral(pair, window=window)[2])
        logger.info("Continuation step", p=p, R=R, n=n, margin=margins[-1], drift=drifts[-1],
                    warm=initial is not None)
    return ContinuationReport(R_list=R_values, window=window, distances=distances, min_margin=margins, drifts=drifts)
