"""Uniform grids and composite Simpson quadrature.

All solvers in this package work on closed uniform grids with an odd number
of points so that composite Simpson weights apply exactly.
"""

from __future__ import annotations

import numpy as np


def uniform_grid(length: float, points: int) -> np.ndarray:
    """Return `points` equally spaced nodes on [0, length].

    `points` must be odd and at least 3 so Simpson weights exist for the grid.
    """
    if length <= 0.0:
        raise ValueError(f"length must be positive, got {length}")
    if points < 3 or points % 2 == 0:
        raise ValueError(f"points must be odd and >= 3, got {points}")
    return np.linspace(0.0, length, points)


def simpson_weights(points: int, step: float) -> np.ndarray:
    """Composite Simpson weights for an odd-length uniform grid with spacing `step`."""
    if points < 3 or points % 2 == 0:
        raise ValueError(f"points must be odd and >= 3, got {points}")
    w = np.ones(points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (step / 3.0)


def integrate(values: np.ndarray, step: float) -> float:
    """Composite Simpson integral of sampled values on a uniform grid."""
    values = np.asarray(values, dtype=float)
    return float(simpson_weights(values.size, step) @ values)
