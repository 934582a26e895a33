"""Interface blow-up of Λ solutions and the sweep towards the limit pair."""
from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np
import structlog
from scipy.interpolate import PchipInterpolator
from tqdm import tqdm

from bvp.solver import minimize_limit
from core.grid import central_derivative
from lambda_system.solver import minimize_lambda
from models.errors import NoCrossing, SolverError, WindowTooSmall
from models.results import BlowupReport, LambdaSolution, SolutionPair, SweepEntry, SweepFailure, SweepReport
from models.schemas import Grid, LambdaParams, LimitProblem, Profile, SweepSettings

logger = structlog.get_logger()

COMPARISON_NODES = 201


def interface_roots(sol: LambdaSolution) -> List[Tuple[float, float]]:
    """(x, common value) at every interior sign change of u - v."""
    x = sol.u.x
    u, v = sol.u.values, sol.v.values
    diff = u - v
    roots = []
    for i in range(1, diff.shape[0] - 2):
        left, right = diff[i], diff[i + 1]
        if left == 0.0:
            roots.append((float(x[i]), float(u[i])))
        elif left * right < 0.0:
            t = left / (left - right)
            roots.append((float(x[i] + t * (x[i + 1] - x[i])), float(u[i] + t * (u[i + 1] - u[i]))))
    return roots


def blowup_extract(
    sol: LambdaSolution, params: LambdaParams, *, window: float = 10.0, n: int = 401
) -> BlowupReport:
    """Locate the interface x_Λ, the common value m_Λ and the rescaled pair.

    With several sign changes the one with the smallest common value is the
    interface. Rescaled profiles u(x_Λ + m y)/m are sampled on |y| <= window
    by monotone cubic interpolation.

    Raises:
        NoCrossing: u - v keeps a constant sign or vanishes only where u = v = 0.
    """
    roots = interface_roots(sol)
    if not roots:
        raise NoCrossing("u - v has no interior sign change", Lambda=params.Lambda)
    x_root, m = min(roots, key=lambda root: root[1])
    if not m > 0:
        raise NoCrossing("u and v cross only where both vanish", Lambda=params.Lambda, x=x_root)

    a, b = params.a, params.b
    y_lo, y_hi = max((a - x_root) / m, -window), min((b - x_root) / m, window)
    y_grid = Grid(a=y_lo, b=y_hi, n=n)
    positions = x_root + m * y_grid.nodes
    rescaled_u = PchipInterpolator(sol.u.x, sol.u.values)(positions) / m
    rescaled_v = PchipInterpolator(sol.v.x, sol.v.values)(positions) / m

    edge = min(x_root - a, b - x_root)
    Lambda, p = params.Lambda, params.p
    report = BlowupReport(
        x_Lambda=x_root,
        m_Lambda=m,
        scale_invariant=Lambda * m ** (2.0 * p),
        edge_scale=Lambda ** (1.0 / (2.0 * p)) * edge,
        edge_scale_sqrt=Lambda**0.5 * edge,
        root_count=len(roots),
        rescaled_u=Profile(grid=y_grid, values=rescaled_u),
        rescaled_v=Profile(grid=y_grid, values=rescaled_v),
    )
    logger.info("Interface located", Lambda=Lambda, x_Lambda=x_root, m_Lambda=m, roots=len(roots))
    return report


def limit_profiles_at(pair: SolutionPair, y: np.ndarray, C: float) -> Tuple[np.ndarray, np.ndarray]:
    """Member of the scaling family A U(B y) with value 1 at 0 and coupling C.

    For a pair with coupling kappa, A = 1/U(0) and B = (C/kappa)^{1/p}/U(0).

    Raises:
        WindowTooSmall: B y leaves [-R, R].
    """
    u0 = float(PchipInterpolator(pair.x, pair.U.values)(0.0))
    B = (C / pair.coupling) ** (1.0 / pair.p) / u0
    stretched = B * np.asarray(y, dtype=float)
    if np.max(np.abs(stretched)) > pair.R:
        raise WindowTooSmall(
            "rescaled window exceeds the limit interval", R=pair.R, reach=float(np.max(np.abs(stretched)))
        )
    U = PchipInterpolator(pair.x, pair.U.values)(stretched) / u0
    V = PchipInterpolator(pair.x, pair.V.values)(stretched) / u0
    return U, V


def rescaled_distance(report: BlowupReport, pair: SolutionPair, window: float) -> Tuple[float, float]:
    """Sup-distance on |y| <= window between the rescaled Λ pair and the limit pair.

    The component large on the left is compared with V. Returns the distance
    and the window actually used.
    """
    grid = report.rescaled_u.grid
    half = min(window, -grid.a, grid.b)
    y = np.linspace(-half, half, COMPARISON_NODES)
    u_tilde = PchipInterpolator(grid.nodes, report.rescaled_u.values)(y)
    v_tilde = PchipInterpolator(grid.nodes, report.rescaled_v.values)(y)
    U, V = limit_profiles_at(pair, y, report.scale_invariant)
    if u_tilde[0] > v_tilde[0]:
        u_tilde, v_tilde = v_tilde, u_tilde
    distance = max(float(np.max(np.abs(u_tilde - U))), float(np.max(np.abs(v_tilde - V))))
    return distance, half


def lambda_sweep(
    params: LambdaParams,
    settings: SweepSettings,
    *,
    limit_pair: Optional[SolutionPair] = None,
    progress: bool = False,
) -> SweepReport:
    """Solve at every Λ of the sweep and compare with the limit pair.

    Each run is warm-started from the previous converged pair. Solver errors
    are recorded per entry and the sweep continues.
    """
    if limit_pair is None:
        limit_pair = minimize_limit(LimitProblem(p=params.p, R=settings.limit_R, n=settings.limit_n))
    report = SweepReport()
    previous: Optional[LambdaSolution] = None
    for Lambda in tqdm(settings.Lambdas, desc="Lambda sweep", disable=not progress):
        current = params.model_copy(update={"Lambda": Lambda})
        initial = None if previous is None else (previous.u.values, previous.v.values)
        try:
            sol = minimize_lambda(current, initial=initial)
            blowup = blowup_extract(sol, current, window=settings.rescale_window, n=settings.rescaled_n)
            distance, used = rescaled_distance(blowup, limit_pair, settings.window)
        except (SolverError, WindowTooSmall) as exc:
            logger.warning("Sweep entry failed", Lambda=Lambda, error=str(exc), error_type=type(exc).__name__)
            report.failures.append(SweepFailure(Lambda=Lambda, error=str(exc), error_type=type(exc).__name__))
            continue
        previous = sol
        slopes = np.concatenate([
            np.abs(central_derivative(sol.u.values, sol.u.grid)),
            np.abs(central_derivative(sol.v.values, sol.v.grid)),
        ])
        report.entries.append(
            SweepEntry(
                Lambda=Lambda,
                lambda1=sol.lambda1,
                lambda2=sol.lambda2,
                T_Lambda=sol.T_Lambda,
                T_drift=sol.T_drift,
                m_Lambda=blowup.m_Lambda,
                x_Lambda=blowup.x_Lambda,
                scale_invariant=blowup.scale_invariant,
                edge_scale=blowup.edge_scale,
                edge_scale_sqrt=blowup.edge_scale_sqrt,
                rescaled_distance=distance,
                max_slope=float(np.max(slopes)),
                root_count=blowup.root_count,
                window=used,
            )
        )
        logger.info("Sweep entry finished", Lambda=Lambda, distance=distance, T_Lambda=sol.T_Lambda)
    return report
