"""Shared numerical primitives: p-Laplacian maps, differences, quadrature."""
from .grid import diff_forward, lp_norm, quad_midpoint, quad_trapezoid, trapezoid_weights
from .nonlinearity import phi_p, phi_p_inv, phi_p_reg, phi_p_reg_slope

__all__ = [
    "diff_forward",
    "lp_norm",
    "phi_p",
    "phi_p_inv",
    "phi_p_reg",
    "phi_p_reg_slope",
    "quad_midpoint",
    "quad_trapezoid",
    "trapezoid_weights",
]
