"""Central finite-difference check of the analytic energy gradients."""
from __future__ import annotations

from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from bvp.energy import pair_energy, pair_gradient
from lambda_system.energy import lambda_energy_values, lambda_gradient_values
from models.schemas import LambdaParams, Profile

KINDS = ("limit", "free", "lambda")
RELATIVE_STEP = 1e-6


def _functions(
    kind: str, n: int, h: float, p: float, eps: float, params: Optional[LambdaParams], kappa: float
) -> Tuple[Callable[[np.ndarray], float], Callable[[np.ndarray], np.ndarray]]:
    if kind == "limit":
        def energy(w):
            return pair_energy(w, w[::-1], h, p, eps, kappa)

        def gradient(w):
            grad_u, grad_v = pair_gradient(w, w[::-1], h, p, eps, kappa)
            return grad_u + grad_v[::-1]

    elif kind == "free":
        def energy(w):
            return pair_energy(w[:n], w[n:], h, p, eps, kappa)

        def gradient(w):
            return np.concatenate(pair_gradient(w[:n], w[n:], h, p, eps, kappa))

    else:
        if params is None:
            raise ValueError("the lambda energy needs params")

        def energy(w):
            return lambda_energy_values(w[:n], w[n:], h, params, eps)

        def gradient(w):
            return np.concatenate(lambda_gradient_values(w[:n], w[n:], h, params, eps))

    return energy, gradient


def gradient_fd_check(
    kind: str,
    point: Union[Profile, Sequence[Profile]],
    p: float,
    eps: float,
    *,
    params: Optional[LambdaParams] = None,
    coupling: Optional[float] = None,
) -> float:
    """Largest deviation of the analytic gradient from central differences.

    ``point`` is U for ``limit`` and a (U, V) or (u, v) pair otherwise. The
    deviation is taken over interior nodes, relative to the gradient sup-norm.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    profiles = [point] if isinstance(point, Profile) else list(point)
    grid = profiles[0].grid
    n = grid.n
    if kind == "lambda" and params is not None:
        p = params.p
    kappa = p - 1.0 if coupling is None else coupling
    energy, gradient = _functions(kind, n, grid.h, p, eps, params, kappa)

    w = np.concatenate([profile.values for profile in profiles])
    analytic = gradient(w)
    interior = np.concatenate([np.arange(1, n - 1) + offset for offset in range(0, w.size, n)])
    numeric = np.zeros(interior.size)
    for k, i in enumerate(interior):
        step = RELATIVE_STEP * (1.0 + abs(w[i]))
        plus, minus = w.copy(), w.copy()
        plus[i] += step
        minus[i] -= step
        numeric[k] = (energy(plus) - energy(minus)) / (2.0 * step)
    reference = analytic[interior]
    return float(np.max(np.abs(numeric - reference))) / max(float(np.max(np.abs(reference))), 1e-300)
