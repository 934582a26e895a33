"""Linearized limit system around a pair and its near-kernel.

Unknowns are (phi, psi) at the interior nodes, stacked as
[phi_1 .. phi_{n-2}, psi_1 .. psi_{n-2}]. Rows read

    ((p-1)|U'|^{p-2} phi')' - kappa[(p-1)U^{p-2}V^p phi + p U^{p-1}V^{p-1} psi]

and the mirrored expression for psi.
"""
from __future__ import annotations

import warnings

import numpy as np
import structlog
from scipy.linalg import svd

from core.grid import central_derivative
from models.errors import DegenerateWeight
from models.results import KernelReport, LinearizedOperator, SolutionPair

logger = structlog.get_logger()

SLOPE_FLOOR = 1e-12
POSITIVE_GUARD = 1e-300
BOUNDARIES = ("mixed", "dirichlet")


def _flux_block(slopes: np.ndarray, p: float, h: float, neumann_left: bool, neumann_right: bool):
    """Tridiagonal block of the weighted second difference with its degenerate cell count."""
    magnitude = np.abs(slopes)
    degenerate = int(np.count_nonzero(magnitude < SLOPE_FLOOR))
    weights = (p - 1.0) * np.maximum(magnitude, SLOPE_FLOOR) ** (p - 2.0) / (h * h)
    m = slopes.shape[0] - 1
    block = np.zeros((m, m))
    idx = np.arange(m)
    block[idx, idx] = -(weights[:-1] + weights[1:])
    block[idx[1:], idx[:-1]] = weights[1:-1]
    block[idx[:-1], idx[1:]] = weights[1:-1]
    # ghost value equal to the first/last unknown
    if neumann_left:
        block[0, 0] += weights[0]
    if neumann_right:
        block[-1, -1] += weights[-1]
    return block, degenerate


def linearize(pair: SolutionPair, boundary: str = "mixed") -> LinearizedOperator:
    """Assemble the dense 2(n-2) operator of the linearized system.

    ``mixed`` keeps phi Dirichlet at -R and Neumann at +R (psi the other way
    round), which leaves the translation mode (U', V') admissible;
    ``dirichlet`` pins both components at both ends.
    """
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}")
    p, kappa, h = pair.p, pair.coupling, pair.grid.h
    mixed = boundary == "mixed"
    U, V = np.abs(pair.U.values[1:-1]), np.abs(pair.V.values[1:-1])
    Ug, Vg = np.maximum(U, POSITIVE_GUARD), np.maximum(V, POSITIVE_GUARD)

    phi_block, bad_u = _flux_block(np.diff(pair.U.values) / h, p, h, False, mixed)
    psi_block, bad_v = _flux_block(np.diff(pair.V.values) / h, p, h, mixed, False)
    degenerate = bad_u + bad_v
    if degenerate:
        warnings.warn(
            DegenerateWeight(f"{degenerate} cells with slope below {SLOPE_FLOOR:g} regularized"),
            stacklevel=2,
        )
        logger.warning("Degenerate linearization weights", cells=degenerate, floor=SLOPE_FLOOR)

    own_u = kappa * (p - 1.0) * Ug ** (p - 2.0) * V**p
    own_v = kappa * (p - 1.0) * Vg ** (p - 2.0) * U**p
    cross = kappa * p * U ** (p - 1.0) * V ** (p - 1.0)

    m = U.shape[0]
    matrix = np.zeros((2 * m, 2 * m))
    matrix[:m, :m] = phi_block - np.diag(own_u)
    matrix[m:, m:] = psi_block - np.diag(own_v)
    matrix[:m, m:] = -np.diag(cross)
    matrix[m:, :m] = -np.diag(cross)

    scale = float(max(np.max(own_u + cross), np.max(own_v + cross)))
    return LinearizedOperator(
        matrix=matrix,
        grid=pair.grid,
        boundary=boundary,
        coefficient_scale=scale,
        degenerate_cells=degenerate,
    )


def translation_mode(pair: SolutionPair) -> np.ndarray:
    """Sampled (U', V') at the interior nodes, stacked like the operator unknowns."""
    dU = central_derivative(pair.U.values, pair.grid)[1:-1]
    dV = central_derivative(pair.V.values, pair.grid)[1:-1]
    return np.concatenate([dU, dV])


def kernel_residual(op: LinearizedOperator, phi: np.ndarray, psi: np.ndarray) -> float:
    """||L k||_inf / (||k||_inf * coefficient_scale) for k = (phi, psi) at interior nodes."""
    k = np.concatenate([np.asarray(phi, dtype=float), np.asarray(psi, dtype=float)])
    norm = float(np.max(np.abs(k)))
    if norm == 0.0:
        return 0.0
    return float(np.max(np.abs(op.matrix @ k))) / (norm * max(op.coefficient_scale, POSITIVE_GUARD))


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(abs(np.dot(a, b)) / (na * nb))


def kernel_check(
    op: LinearizedOperator,
    pair: SolutionPair,
    *,
    gap: float = 1e2,
    alignment: float = 0.99,
    margin: float = 2.0,
) -> KernelReport:
    """Two smallest singular values of the row-equilibrated operator.

    Passes iff sigma2 / sigma1 >= ``gap`` and the least right singular vector
    is aligned with (U', V') on |x| <= R - ``margin``.
    """
    rows = np.max(np.abs(op.matrix), axis=1)
    equilibrated = op.matrix / np.where(rows > 0, rows, 1.0)[:, None]
    _, sigma, vt = svd(equilibrated)
    sigma1, sigma2 = float(sigma[-1]), float(sigma[-2])
    ratio = sigma2 / max(sigma1, POSITIVE_GUARD)

    mode = translation_mode(pair)
    inner = np.abs(pair.x[1:-1]) <= pair.R - margin
    mask = np.concatenate([inner, inner])
    cosine = _cosine(vt[-1][mask], mode[mask])

    m = pair.grid.n - 2
    residual = kernel_residual(op, mode[:m], mode[m:])
    passed = bool(ratio >= gap and cosine >= alignment)
    logger.info(
        "Kernel check",
        sigma1=sigma1,
        sigma2=sigma2,
        gap=ratio,
        alignment=cosine,
        residual=residual,
        passed=passed,
    )
    return KernelReport(
        sigma1=sigma1, sigma2=sigma2, gap=ratio, alignment=cosine, residual=residual, passed=passed
    )
