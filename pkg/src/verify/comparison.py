"""Pointwise comparison of a sub-solution and a super-solution past a matching point."""
from __future__ import annotations

import numpy as np
import structlog

from ivp.perron import equation_residual
from models.errors import HypothesisViolated
from models.schemas import Profile

logger = structlog.get_logger()

ORDER_SLACK = 1e-8


def comparison_test(V: Profile, W: Profile, a_weight: Profile, x0: int, p: float, tol: float = 1e-6) -> bool:
    """Whether V <= W at every node from index ``x0`` on.

    V must be a discrete sub-solution and W a super-solution of
    |y'|^{p-2} y'' = a |y|^{p-2} y, with V(x0) <= W(x0).

    Raises:
        HypothesisViolated: a residual has the wrong sign or the matching
            condition fails; the comparison is then not attempted.
    """
    if not (V.grid == W.grid == a_weight.grid):
        raise ValueError("V, W and a_weight must share a grid")
    if not 0 <= x0 < V.grid.n:
        raise ValueError("x0 must index a node")
    sub = equation_residual(V, a_weight, p)
    sup = equation_residual(W, a_weight, p)
    worst_sub, worst_sup = float(np.min(sub)), float(np.max(sup))
    if worst_sub < -tol:
        raise HypothesisViolated("V is not a sub-solution", worst_residual=worst_sub, tol=tol)
    if worst_sup > tol:
        raise HypothesisViolated("W is not a super-solution", worst_residual=worst_sup, tol=tol)
    if V.values[x0] > W.values[x0] + ORDER_SLACK:
        raise HypothesisViolated(
            "V exceeds W at the matching point", x0=x0, V=float(V.values[x0]), W=float(W.values[x0])
        )
    ordered = bool(np.all(V.values[x0:] <= W.values[x0:] + ORDER_SLACK))
    logger.debug("Comparison test", x0=x0, ordered=ordered, sub=worst_sub, sup=worst_sup)
    return ordered
