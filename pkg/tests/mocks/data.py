"""Centralized synthetic profile builders for tests."""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from models.results import LambdaSolution, SolutionPair
from models.schemas import Grid, LambdaParams, Profile

Fn = Callable[[np.ndarray], np.ndarray]


def make_pair(
    U: Fn,
    V: Fn,
    *,
    R: float = 8.0,
    n: int = 801,
    p: float = 2.0,
    coupling: Optional[float] = None,
) -> SolutionPair:
    grid = Grid.symmetric(R, n)
    return SolutionPair(
        grid=grid,
        U=Profile.from_function(grid, U),
        V=Profile.from_function(grid, V),
        p=p,
        coupling=p - 1.0 if coupling is None else coupling,
    )


def make_linear_pair(*, R: float = 8.0, n: int = 801, p: float = 2.0) -> SolutionPair:
    """U(x) = x, V = 0: an exact entire-line solution with first integral 1."""
    return make_pair(lambda x: x, np.zeros_like, R=R, n=n, p=p)


def make_gaussian_pair(*, R: float = 8.0, n: int = 16001) -> SolutionPair:
    return make_pair(lambda x: np.exp(-(x**2)), np.zeros_like, R=R, n=n)


def make_zero_pair(*, R: float = 4.0, n: int = 81) -> SolutionPair:
    return make_pair(np.zeros_like, np.zeros_like, R=R, n=n)


def with_V(pair: SolutionPair, values: np.ndarray) -> SolutionPair:
    return pair.model_copy(update={"V": pair.V.with_values(values)})


def make_lambda_params(
    *,
    p: float = 2.0,
    alpha: float = 1.0,
    beta: float = 1.0,
    Lambda: float = 100.0,
    a: float = -1.0,
    b: float = 1.0,
    n: int = 201,
    **extra,
) -> LambdaParams:
    return LambdaParams(p=p, alpha=alpha, beta=beta, Lambda=Lambda, a=a, b=b, n=n, **extra)


def make_lambda_solution(u: np.ndarray, v: np.ndarray, params: LambdaParams) -> LambdaSolution:
    grid = params.grid
    return LambdaSolution(params=params, u=Profile(grid=grid, values=u), v=Profile(grid=grid, values=v))


def random_profile(grid: Grid, *, seed: int = 0, low: float = 0.5, high: float = 1.5) -> Profile:
    rng = np.random.default_rng(seed)
    return Profile(grid=grid, values=rng.uniform(low, high, grid.n))
