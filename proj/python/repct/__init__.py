"""Critical-threshold classification and Lagrangian dynamics for the 2D
restricted Euler-Poisson system."""

from ._core import (
    F,
    G,
    classify,
    critical_points,
    empirical_threshold,
    g1_nonzero_background,
    g2_nonzero_background,
    g_zero_background,
    integrate_full,
    integrate_reduced,
    invariant_value,
    render_portrait,
    run_cli,
    run_verification,
    spectral_gap,
    sweep,
)

__all__ = [
    "F",
    "G",
    "classify",
    "critical_points",
    "empirical_threshold",
    "g1_nonzero_background",
    "g2_nonzero_background",
    "g_zero_background",
    "integrate_full",
    "integrate_reduced",
    "invariant_value",
    "render_portrait",
    "run_cli",
    "run_verification",
    "spectral_gap",
    "sweep",
]
