"""Incomplete gamma toolkit package."""

from .toolkit import (
    GammaProfile,
    big_g,
    big_g_quadrature,
    g,
    g_defining,
    g_derivative,
    g_tail_integral,
    g_tail_integral_quadrature,
    gamma_star,
    log_upper_incomplete_gamma,
    upper_incomplete_gamma,
)

__all__ = [
    "GammaProfile",
    "big_g",
    "big_g_quadrature",
    "g",
    "g_defining",
    "g_derivative",
    "g_tail_integral",
    "g_tail_integral_quadrature",
    "gamma_star",
    "log_upper_incomplete_gamma",
    "upper_incomplete_gamma",
]
