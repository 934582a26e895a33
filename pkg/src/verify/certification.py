"""Certification of a limit pair against its qualitative properties."""
from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import structlog

from bvp.barrier import barrier_check
from models.errors import DiagnosticError
from models.results import CertificationReport, CheckResult, SolutionPair
from models.schemas import CertificationThresholds
from verify.diagnostics import (
    asymptote_fit,
    first_integral,
    gaussian_decay_fit,
    limits_report,
    monotonicity_report,
    symmetry_defect,
)
from verify.linearization import kernel_check, linearize

logger = structlog.get_logger()

CHECK_NAMES = (
    "first_integral",
    "symmetry",
    "monotonicity",
    "asymptote",
    "gaussian_decay",
    "limits",
    "barrier",
    "kernel",
)


class PairCertifier:
    """Run named certification checks on a SolutionPair."""

    def __init__(self, thresholds: Optional[CertificationThresholds] = None):
        self.thresholds = thresholds or CertificationThresholds()
        self._checks: Dict[str, Callable[[SolutionPair], CheckResult]] = {
            "first_integral": self.check_first_integral,
            "symmetry": self.check_symmetry,
            "monotonicity": self.check_monotonicity,
            "asymptote": self.check_asymptote,
            "gaussian_decay": self.check_gaussian_decay,
            "limits": self.check_limits,
            "barrier": self.check_barrier,
            "kernel": self.check_kernel,
        }

    def check_first_integral(self, pair: SolutionPair) -> CheckResult:
        _, level, drift = first_integral(pair)
        return CheckResult(
            name="first_integral",
            passed=drift <= self.thresholds.drift,
            values={"level": level, "drift": drift},
            threshold={"drift": self.thresholds.drift},
            claim="|U'|^p + |V'|^p - U^p V^p is constant",
        )

    def check_symmetry(self, pair: SolutionPair) -> CheckResult:
        defect = symmetry_defect(pair)
        scale = float(np.max(np.abs(pair.U.values)))
        limit = self.thresholds.symmetry * scale
        return CheckResult(
            name="symmetry",
            passed=defect <= limit,
            values={"defect": defect, "max_U": scale},
            threshold={"defect": limit},
            claim="V(x) = U(-x)",
        )

    def check_monotonicity(self, pair: SolutionPair) -> CheckResult:
        report = monotonicity_report(pair)
        return CheckResult(
            name="monotonicity",
            passed=report.passed,
            values={
                "u_increasing": float(report.u_increasing),
                "v_decreasing": float(report.v_decreasing),
                "u_convex": float(report.u_convex),
                "max_gradient_sum": report.max_gradient_sum,
            },
            claim="U increasing and convex, V decreasing, |U'| + |V'| bounded",
        )

    def check_asymptote(self, pair: SolutionPair) -> CheckResult:
        fit = asymptote_fit(pair)
        _, level, _ = first_integral(pair)
        target = max(level, 0.0) ** (1.0 / pair.p)
        deviation = abs(fit.slope_right - target)
        return CheckResult(
            name="asymptote",
            passed=deviation <= self.thresholds.slope * target,
            values={
                "slope_right": fit.slope_right,
                "level_root": target,
                "b1_hat": fit.b1_hat,
                "b2_hat": fit.b2_hat,
                "monotone_approach": float(bool(fit.monotone_approach)),
            },
            threshold={"slope_deviation": self.thresholds.slope * target},
            claim="U'(+inf) = T_inf^(1/p)",
        )

    def check_gaussian_decay(self, pair: SolutionPair) -> CheckResult:
        fit = gaussian_decay_fit(pair, window=self.thresholds.decay_window)
        return CheckResult(
            name="gaussian_decay",
            passed=fit.decay_within(self.thresholds),
            values={
                "decay_rate": fit.decay_rate,
                "r_squared": fit.r_squared,
                "k_hat": fit.k_hat,
                "K_hat": fit.K_hat,
                "c_hat": fit.c_hat,
                "C_hat": fit.C_hat,
            },
            threshold={"r_squared": self.thresholds.r_squared, "bracket_ratio": self.thresholds.bracket_ratio},
            claim="U decays like a Gaussian at -inf with U' comparable to |x| U",
        )

    def check_limits(self, pair: SolutionPair) -> CheckResult:
        report = limits_report(pair, threshold=self.thresholds.limits)
        return CheckResult(
            name="limits",
            passed=report.passed,
            values=dict(report.values),
            threshold={"max": self.thresholds.limits},
            claim="mixed products, U and U' vanish at the truncated ends",
        )

    def check_barrier(self, pair: SolutionPair) -> CheckResult:
        passed, violation = barrier_check(pair, pair.p, tol=self.thresholds.barrier)
        return CheckResult(
            name="barrier",
            passed=passed,
            values={"max_violation": violation},
            threshold={"max_violation": self.thresholds.barrier},
            claim="V stays below the decaying barrier",
        )

    def check_kernel(self, pair: SolutionPair) -> CheckResult:
        operator = linearize(pair)
        report = kernel_check(
            operator, pair, gap=self.thresholds.gap, alignment=self.thresholds.alignment
        )
        passed = report.passed and report.residual <= self.thresholds.kernel_residual
        return CheckResult(
            name="kernel",
            passed=bool(passed),
            values={
                "sigma1": report.sigma1,
                "sigma2": report.sigma2,
                "gap": report.gap,
                "alignment": report.alignment,
                "residual": report.residual,
                "degenerate_cells": float(operator.degenerate_cells),
            },
            threshold={
                "gap": self.thresholds.gap,
                "alignment": self.thresholds.alignment,
                "residual": self.thresholds.kernel_residual,
            },
            claim="the linearized system has the one-dimensional kernel spanned by (U', V')",
        )

    def run(self, pair: SolutionPair, checks: Optional[Sequence[str]] = None) -> CertificationReport:
        """Run ``checks`` (all by default) in the canonical order.

        A diagnostic error inside a check fails that check only.
        """
        selected = list(CHECK_NAMES) if checks is None else list(checks)
        unknown = [name for name in selected if name not in self._checks]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")

        results: List[CheckResult] = []
        for name in CHECK_NAMES:
            if name not in selected:
                continue
            try:
                result = self._checks[name](pair)
            except DiagnosticError as exc:
                result = CheckResult(name=name, passed=False, error=f"{type(exc).__name__}: {exc}")
            results.append(result)
            logger.info("Certification check", check=name, passed=result.passed)

        report = CertificationReport(checks=results)
        if not report.passed:
            logger.warning("Certification failed", failed_checks=report.failed)
        return report
