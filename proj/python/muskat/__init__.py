"""One-phase Muskat interface simulator (pseudo-spectral core).

Thin convenience layer over the compiled module: fields are plain numpy
sample arrays on the uniform torus grid, shape (n,) or (n, n) with n a
power of two.
"""

import numpy as np

from _muskat import (
    SolverRegimeError,
    ValidationError,
    curvature,
    dn_image,
    fit_decay_rate,
    linear_rate,
    lp_project,
    lyapunov_j,
    norms,
    simulate,
)

__all__ = [
    "SolverRegimeError",
    "ValidationError",
    "curvature",
    "dn_image",
    "fit_decay_rate",
    "grid_points",
    "linear_rate",
    "lp_project",
    "lyapunov_j",
    "norms",
    "simulate",
    "single_mode",
]


def grid_points(n, period=2.0 * np.pi):
    """Sample locations x_i = i * period / n of the length-n torus grid."""
    return np.arange(n) * (period / n)


def single_mode(n, k, amplitude, phase=0.0, period=2.0 * np.pi):
    """Samples of amplitude * cos(k x + phase) on the length-n grid."""
    x = grid_points(n, period)
    return amplitude * np.cos(k * (2.0 * np.pi / period) * x + phase)
