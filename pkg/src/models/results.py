"""Result models produced by the solvers and diagnostics."""
from __future__ import annotations

from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from models.schemas import CertificationThresholds, Grid, LambdaParams, Profile


class TrajectoryStatus(str, Enum):
    """How an initial-value run ended."""

    REACHED_XMAX = "reached_xmax"
    IDENTICALLY_ZERO = "identically_zero"
    BLOW_UP_DETECTED = "blow_up_detected"
    SIGN_CLASSIFIED_NEGATIVE = "sign_classified_negative"

    @property
    def code(self) -> int:
        return list(TrajectoryStatus).index(self)


class Trajectory(BaseModel):
    """Initial-value solution sampled on increasing nodes."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    nodes: np.ndarray
    y: np.ndarray
    dy: np.ndarray
    status: TrajectoryStatus
    resolved_to: Optional[float] = None

    @field_validator("nodes", "y", "dy", mode="before")
    @classmethod
    def as_float_array(cls, v):
        arr = np.array(v, dtype=float)
        if arr.ndim != 1:
            raise ValueError("trajectory columns must be one-dimensional")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_columns(self) -> "Trajectory":
        if not (self.nodes.shape == self.y.shape == self.dy.shape):
            raise ValueError("nodes, y and dy must have equal length")
        if self.nodes.size < 2 or np.any(np.diff(self.nodes) <= 0):
            raise ValueError("trajectory nodes must be strictly increasing")
        return self

    @property
    def x_end(self) -> float:
        return float(self.nodes[-1])


class StageRecord(BaseModel):
    """One regularization stage of a descent run."""

    eps: float
    iterations: int
    grad_norm: float
    energies: List[float] = Field(default_factory=list)


class SolutionPair(BaseModel):
    """Converged (U, V) of the limit system on [-R, R]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: Grid
    U: Profile
    V: Profile
    p: float = Field(..., gt=1)
    coupling: float = Field(..., gt=0)
    T_inf: float = 0.0
    b1: Optional[float] = None
    b2: Optional[float] = None
    grad_norm: float = 0.0
    energy: float = 0.0
    eps: float = 0.0
    iterations: int = 0
    enforce_symmetry: bool = True
    stages: List[StageRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_grids(self) -> "SolutionPair":
        if self.U.grid != self.grid or self.V.grid != self.grid:
            raise ValueError("U and V must live on the pair grid")
        return self

    @property
    def R(self) -> float:
        return self.grid.b

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes


class LambdaSolution(BaseModel):
    """Converged normalized pair (u, v) of the Λ system."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    params: LambdaParams
    u: Profile
    v: Profile
    lambda1: float = 0.0
    lambda2: float = 0.0
    T_Lambda: float = 0.0
    T_drift: float = 0.0
    grad_norm: float = 0.0
    energy: float = 0.0
    iterations: int = 0
    stages: List[StageRecord] = Field(default_factory=list)


class BlowupReport(BaseModel):
    """Interface location, common value and rescaled profiles."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x_Lambda: float
    m_Lambda: float = Field(..., gt=0)
    scale_invariant: float
    edge_scale: float
    edge_scale_sqrt: float
    root_count: int = Field(..., ge=1)
    rescaled_u: Profile
    rescaled_v: Profile


class AsymptoticsReport(BaseModel):
    """Slope/intercept fit at the growing ends and Gaussian fit at the decaying end."""

    slope_right: Optional[float] = None
    b1_hat: Optional[float] = None
    b2_hat: Optional[float] = None
    monotone_approach: Optional[bool] = None
    decay_rate: Optional[float] = None
    k_hat: Optional[float] = None
    K_hat: Optional[float] = None
    m_hat: Optional[float] = None
    M_hat: Optional[float] = None
    c_hat: Optional[float] = None
    C_hat: Optional[float] = None
    r_squared: Optional[float] = None
    window_nodes: int = 0

    @model_validator(mode="after")
    def check_ordering(self) -> "AsymptoticsReport":
        for low, high in (("k_hat", "K_hat"), ("m_hat", "M_hat"), ("c_hat", "C_hat")):
            lo, hi = getattr(self, low), getattr(self, high)
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"{low} must not exceed {high}")
        return self

    def decay_within(self, thresholds: CertificationThresholds) -> bool:
        """Gaussian fit quality and c_hat, C_hat bracket against the certification thresholds."""
        if self.r_squared is None or self.c_hat is None or self.C_hat is None:
            return False
        if not (self.r_squared >= thresholds.r_squared and 0 < self.c_hat <= self.C_hat < np.inf):
            return False
        return self.C_hat / self.c_hat <= thresholds.bracket_ratio

    @property
    def decay_passed(self) -> bool:
        return self.decay_within(CertificationThresholds())


class MonotonicityReport(BaseModel):
    u_increasing: bool
    v_decreasing: bool
    u_convex: bool
    max_gradient_sum: float

    @property
    def passed(self) -> bool:
        return self.u_increasing and self.v_decreasing and self.u_convex and np.isfinite(
            self.max_gradient_sum
        )


class LimitsReport(BaseModel):
    """Largest value of each vanishing quantity near the truncated ends."""

    values: Dict[str, float]
    threshold: float

    @property
    def failures(self) -> List[str]:
        return [name for name, value in self.values.items() if not value <= self.threshold]

    @property
    def passed(self) -> bool:
        return not self.failures


class LinearizedOperator(BaseModel):
    """Dense matrix of the linearized system acting on (phi, psi) at interior nodes."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    grid: Grid
    boundary: str
    coefficient_scale: float
    degenerate_cells: int = 0

    @model_validator(mode="after")
    def check_matrix(self) -> "LinearizedOperator":
        expected = 2 * (self.grid.n - 2)
        if self.matrix.shape != (expected, expected):
            raise ValueError(f"operator must be {expected}x{expected}")
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("operator entries must be finite")
        return self

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


class KernelReport(BaseModel):
    sigma1: float
    sigma2: float
    gap: float
    alignment: float
    residual: float
    passed: bool


class ContinuationReport(BaseModel):
    """Behaviour of the window restriction as R grows."""

    R_list: List[float]
    window: float
    distances: List[float]
    min_margin: List[float]
    drifts: List[float]

    @property
    def nontrivial(self) -> bool:
        return bool(self.min_margin) and self.min_margin[-1] >= -1e-3


class SweepEntry(BaseModel):
    Lambda: float
    lambda1: float
    lambda2: float
    T_Lambda: float
    T_drift: float
    m_Lambda: float
    x_Lambda: float
    scale_invariant: float
    edge_scale: float
    edge_scale_sqrt: float
    rescaled_distance: float
    max_slope: float
    root_count: int
    window: float


class SweepFailure(BaseModel):
    Lambda: float
    error: str
    error_type: str


class SweepReport(BaseModel):
    entries: List[SweepEntry] = Field(default_factory=list)
    failures: List[SweepFailure] = Field(default_factory=list)

    @property
    def distances(self) -> List[float]:
        return [entry.rescaled_distance for entry in self.entries]


class CheckResult(BaseModel):
    """One certification check as written to the report."""

    model_config = ConfigDict(populate_by_name=True)

    name: str
    passed: bool = Field(..., serialization_alias="pass")
    values: Dict[str, Optional[float]] = Field(default_factory=dict)
    threshold: Dict[str, float] = Field(default_factory=dict)
    claim: str = Field("", serialization_alias="property")
    error: Optional[str] = None


class CertificationReport(BaseModel):
    format_version: int = 1
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed_count(self) -> int:
        return sum(1 for check in self.checks if check.passed)

    @property
    def failed(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    @property
    def passed(self) -> bool:
        return not self.failed
