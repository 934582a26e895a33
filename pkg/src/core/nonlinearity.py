"""The monotone map s -> |s|^{p-2} s, its inverse and its regularization.

All functions accept scalars or numpy arrays and are vectorized.
"""
from __future__ import annotations

import numpy as np


def _power_times(s, exponent: float):
    """|s|^exponent * s, extended by 0 at s = 0."""
    s = np.asarray(s, dtype=float)
    magnitude = np.abs(s)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(magnitude > 0, np.power(magnitude, exponent) * s, 0.0)
    return out if out.ndim else float(out)


def phi_p(s, p: float):
    """Return |s|^{p-2} s."""
    return _power_times(s, p - 2.0)


def phi_p_inv(z, p: float):
    """Return |z|^{1/(p-1)-1} z, the inverse of :func:`phi_p`."""
    return _power_times(z, 1.0 / (p - 1.0) - 1.0)


def phi_p_reg(s, p: float, eps: float):
    """Return (s^2 + eps^2)^{(p-2)/2} s; equals phi_p when eps = 0."""
    if eps == 0:
        return phi_p(s, p)
    s = np.asarray(s, dtype=float)
    out = np.power(s * s + eps * eps, 0.5 * (p - 2.0)) * s
    return out if out.ndim else float(out)


def phi_p_reg_slope(s, p: float, eps: float):
    """Derivative of :func:`phi_p_reg` in s.

    Equals (s^2+eps^2)^{(p-4)/2} ((p-1) s^2 + eps^2). At eps = 0 and s = 0
    it is 0 for p > 2 and +inf for p < 2; callers regularize first.
    """
    s = np.asarray(s, dtype=float)
    q = s * s + eps * eps
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.power(q, 0.5 * (p - 4.0)) * ((p - 1.0) * s * s + eps * eps)
    out = np.where(q > 0, out, 1.0 if p == 2 else (0.0 if p > 2 else np.inf))
    return out if out.ndim else float(out)
