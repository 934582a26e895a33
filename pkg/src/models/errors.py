"""Exception hierarchy shared by the solvers, diagnostics and the CLI."""
from __future__ import annotations

from typing import Any, Dict


class PlapError(Exception):
    """Base class for every error raised by the package.

    Keyword arguments are kept in ``context`` so run manifests can record
    the numbers that led to the failure.
    """

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in sorted(self.context.items()))
        return f"{self.message} ({details})"


class ConfigurationError(PlapError):
    """Invalid or unreadable run configuration."""


class SolverError(PlapError):
    """A numerical solve did not produce a usable result."""


class NoContraction(SolverError):
    """Picard iteration stopped contracting on the current window."""


class StepUnderflow(SolverError):
    """The adaptive integrator could not make progress."""


class BracketInvalid(SolverError):
    """Both ends of a shooting bracket classify the same way."""


class NoConvergence(SolverError):
    """An iteration exhausted its budget without meeting its tolerance."""


class MaxIterations(SolverError):
    """A descent stage hit its iteration cap at the final regularization."""


class LineSearchFailure(SolverError):
    """Backtracking found no sufficient decrease."""


class NoCrossing(SolverError):
    """The two components never cross inside the interval."""


class DiagnosticError(PlapError):
    """A diagnostic could not be evaluated on the given data."""


class WindowTooSmall(DiagnosticError):
    """Fit window holds too few nodes."""


class WindowEmpty(DiagnosticError):
    """No usable (positive) node in the fit window."""


class HypothesisViolated(DiagnosticError):
    """Inputs of a comparison do not satisfy its hypotheses."""


class DegenerateWeight(RuntimeWarning):
    """A flux weight of the linearized operator vanished and was regularized."""
