"""Pydantic models for validated solver inputs."""
from __future__ import annotations

import math
from typing import Annotated, Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

DEFAULT_EPS_SCHEDULE: Tuple[float, ...] = (1e-1, 1e-2, 1e-3, 1e-4, 1e-6)

Power = Annotated[float, Field(gt=1)]


def _check_schedule(schedule: Tuple[float, ...]) -> Tuple[float, ...]:
    if len(schedule) == 0:
        raise ValueError("eps_schedule must not be empty")
    if any(eps <= 0 for eps in schedule):
        raise ValueError("eps_schedule entries must be positive")
    if any(later >= earlier for earlier, later in zip(schedule, schedule[1:])):
        raise ValueError("eps_schedule must be strictly decreasing")
    return tuple(float(eps) for eps in schedule)


class Grid(BaseModel):
    """Uniform mesh on [a, b] with n nodes."""

    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    n: int = Field(..., ge=3)

    @model_validator(mode="after")
    def check_interval(self) -> "Grid":
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("grid endpoints must be finite")
        if not self.b > self.a:
            raise ValueError("grid requires b > a")
        return self

    @classmethod
    def symmetric(cls, R: float, n: int) -> "Grid":
        return cls(a=-R, b=R, n=n)

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.a + np.arange(self.n) * self.h


class Profile(BaseModel):
    """Real function sampled on the nodes of a Grid.

    Values are copied on construction and stored read-only.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def as_float_array(cls, v):
        arr = np.array(v, dtype=float)
        if arr.ndim != 1:
            raise ValueError("profile values must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("profile values must be finite")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_length(self) -> "Profile":
        if self.values.shape[0] != self.grid.n:
            raise ValueError(
                f"profile has {self.values.shape[0]} values for a grid of {self.grid.n} nodes"
            )
        return self

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> "Profile":
        return cls(grid=grid, values=np.broadcast_to(fn(grid.nodes), (grid.n,)))

    @classmethod
    def zeros(cls, grid: Grid) -> "Profile":
        return cls(grid=grid, values=np.zeros(grid.n))

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def with_values(self, values) -> "Profile":
        return Profile(grid=self.grid, values=values)

    def reflected(self) -> "Profile":
        """Profile of x -> f(-x) on a symmetric grid."""
        return Profile(grid=self.grid, values=self.values[::-1])


class Exponent(BaseModel):
    """Exponent p of the p-Laplacian with the regularization scale eps."""

    model_config = ConfigDict(frozen=True)

    p: Power
    eps: float = Field(0.0, ge=0)


class IvpSpec(BaseModel):
    """Initial data for |y'|^{p-2} y'' = x^p |y|^{p-2} y on [x0, x_max]."""

    model_config = ConfigDict(frozen=True)

    p: Power
    x0: float = Field(0.0, ge=0)
    y0: float = 1.0
    y1: float = 0.0
    x_max: float = 2.0
    step: float = Field(1e-3, gt=0)
    tol: float = Field(1e-10, gt=0)

    @model_validator(mode="after")
    def check_span(self) -> "IvpSpec":
        if not self.x_max > self.x0:
            raise ValueError("x_max must exceed x0")
        return self

    @property
    def exponent(self) -> Exponent:
        return Exponent(p=self.p)


class ScaledShootingSpec(BaseModel):
    """Scaling parameters of the weighted decaying solution."""

    model_config = ConfigDict(frozen=True)

    beta: float = Field(..., gt=0)
    gamma: float = Field(..., gt=0)


class ShootingSettings(BaseModel):
    """Parameters of a decaying-solution shot."""

    model_config = ConfigDict(frozen=True)

    p: Power
    y1: float = Field(-1.0, lt=0)
    x_far: float = Field(10.0, gt=0)
    bracket: Tuple[float, float] = (1e-2, 1e2)
    step: float = Field(1e-3, gt=0)
    tol: float = Field(1e-10, gt=0)
    decay_floor: float = Field(1e-3, gt=0)

    @field_validator("bracket")
    @classmethod
    def check_bracket(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        lo, hi = v
        if not 0 < lo < hi:
            raise ValueError("bracket must satisfy 0 < lo < hi")
        return v


class PerronSettings(BaseModel):
    """Parameters of the monotone relaxation on [0, R]."""

    model_config = ConfigDict(frozen=True)

    p: Power
    R: float = Field(6.0, gt=0)
    n: int = Field(601, ge=11)
    tol: float = Field(1e-12, gt=0)
    max_iter: int = Field(500, ge=1)


class LimitProblem(BaseModel):
    """Finite-interval minimization for the limit system on [-R, R]."""

    model_config = ConfigDict(frozen=True)

    p: Power
    R: float = Field(8.0, gt=0)
    n: int = Field(801, ge=11)
    eps_schedule: Tuple[float, ...] = DEFAULT_EPS_SCHEDULE
    tol: float = Field(1e-8, gt=0)
    enforce_symmetry: bool = True
    coupling: Optional[float] = Field(None, gt=0)
    max_iter: int = Field(5000, ge=1)
    metric_floor: float = Field(1e-6, gt=0)

    @field_validator("n")
    @classmethod
    def force_odd(cls, v: int) -> int:
        return v if v % 2 == 1 else v + 1

    @field_validator("eps_schedule")
    @classmethod
    def check_schedule(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        return _check_schedule(v)

    @property
    def kappa(self) -> float:
        """Coupling constant; p - 1 unless set explicitly."""
        return self.coupling if self.coupling is not None else self.p - 1.0

    @property
    def exponent(self) -> Exponent:
        """p with the final regularization scale."""
        return Exponent(p=self.p, eps=self.eps_schedule[-1])

    @property
    def grid(self) -> Grid:
        return Grid.symmetric(self.R, self.n)


class LambdaParams(BaseModel):
    """Constrained Λ-penalized system on ]a, b[."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    p: Power
    alpha: float = Field(1.0, ge=0)
    beta: float = Field(1.0, ge=0)
    Lambda: float = Field(..., ge=0)
    a: float = -1.0
    b: float = 1.0
    n: int = Field(801, ge=11)
    eps_schedule: Tuple[float, ...] = DEFAULT_EPS_SCHEDULE
    tol: float = Field(1e-8, gt=0)
    max_iter: int = Field(20000, ge=1)
    metric_floor: float = Field(1e-6, gt=0)

    @model_validator(mode="after")
    def check_interval(self) -> "LambdaParams":
        if not self.b > self.a:
            raise ValueError("interval requires b > a")
        return self

    @field_validator("eps_schedule")
    @classmethod
    def check_schedule(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        return _check_schedule(v)

    @property
    def grid(self) -> Grid:
        return Grid(a=self.a, b=self.b, n=self.n)

    @property
    def exponent(self) -> Exponent:
        """p with the final regularization scale."""
        return Exponent(p=self.p, eps=self.eps_schedule[-1])

    def swapped(self) -> "LambdaParams":
        """Same problem with the roles of the two components exchanged."""
        return self.model_copy(update={"alpha": self.beta, "beta": self.alpha})


class SweepSettings(BaseModel):
    """Λ sweep and its comparison with the limit pair."""

    model_config = ConfigDict(frozen=True)

    Lambdas: List[float] = Field(default_factory=lambda: [1e2, 1e3, 1e4])
    window: float = Field(1.0, gt=0)
    rescale_window: float = Field(10.0, gt=0)
    rescaled_n: int = Field(401, ge=11)
    limit_R: float = Field(8.0, gt=0)
    limit_n: int = Field(801, ge=11)

    @field_validator("Lambdas")
    @classmethod
    def check_lambdas(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("Lambdas must not be empty")
        if any(value <= 0 for value in v):
            raise ValueError("Lambdas must be positive")
        if any(later < earlier for earlier, later in zip(v, v[1:])):
            raise ValueError("Lambdas must be nondecreasing")
        return [float(value) for value in v]


class CertificationThresholds(BaseModel):
    """Pass thresholds of the certification checks."""

    model_config = ConfigDict(frozen=True)

    drift: float = Field(1e-3, gt=0)
    symmetry: float = Field(1e-2, gt=0)
    slope: float = Field(1e-2, gt=0)
    r_squared: float = Field(0.99, gt=0, le=1)
    bracket_ratio: float = Field(10.0, gt=1)
    decay_window: Tuple[float, float] = (-6.0, -3.0)
    limits: float = Field(1e-3, gt=0)
    barrier: float = Field(1e-6, ge=0)
    gap: float = Field(1e2, gt=1)
    alignment: float = Field(0.99, gt=0, le=1)
    kernel_residual: float = Field(1e-3, gt=0)
