"""Finite-difference stencils on nonuniform 1-D grids."""

import numpy as np


def _fd_weights(x0: float, xs: np.ndarray, m: int) -> np.ndarray:
    """Fornberg weights for the ``m``-th derivative at ``x0`` from nodes ``xs``."""
    n = xs.size
    c = np.zeros((n, m + 1))
    c1, c4 = 1.0, xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2, c5, c4 = 1.0, c4, xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def derivative(g: np.ndarray, r: np.ndarray, m: int) -> np.ndarray:
    """Second-order ``m``-th derivative: 3-point centred inside, one-sided at the ends."""
    n = r.size
    out = np.empty(n)
    width = m + 2  # nodes for second order at the ends
    for i in range(n):
        if 0 < i < n - 1:
            idx = np.arange(i - 1, i + 2)
        elif i == 0:
            idx = np.arange(0, width)
        else:
            idx = np.arange(n - width, n)
        out[i] = _fd_weights(r[i], r[idx], m) @ g[idx]
    return out
