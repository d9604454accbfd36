"""Rational-Chebyshev collocation on the half line.

Interior Chebyshev-Gauss points x_k = cos((2k+1)pi/2n) are transplanted to
r in (0, inf) by the algebraic map r = L (1+x)/(1-x).  Both endpoints are
excluded, so operator entries carrying 1/r singular coefficients stay finite
and no boundary rows are needed; decay at infinity is captured by the map.

The differentiation matrix is the barycentric Chebyshev matrix divided by the
map Jacobian; quadrature weights are Fejer's first rule times the Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .profile import evaluate_profile

__all__ = ["HalfLineGrid", "build_grid", "resample"]


@dataclass(frozen=True)
class HalfLineGrid:
    """Collocation nodes (increasing, all positive) with derivative and
    quadrature realizations: (diff @ f) approximates f', quad @ f
    approximates the integral of f over (0, inf)."""

    n: int
    map_scale: float
    nodes: np.ndarray
    diff: np.ndarray
    quad: np.ndarray


def build_grid(n, map_scale=10.0):
    """Build the n-node rational-Chebyshev grid with map length map_scale."""
    if not (isinstance(n, (int, np.integer)) and n >= 16):
        raise ValueError(f"need integer n >= 16, got {n!r}")
    if not map_scale > 0:
        raise ValueError(f"need map_scale > 0, got {map_scale!r}")
    L = float(map_scale)
    k = np.arange(n)
    theta = (2 * k + 1) * np.pi / (2 * n)
    x = np.cos(theta)
    # barycentric first-derivative matrix at Chebyshev-Gauss points
    w = (-1.0) ** k * np.sin(theta)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    D = (w[None, :] / w[:, None]) / dx
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))  # rows sum to zero: D const = 0
    r = L * (1 + x) / (1 - x)
    jac = 2 * L / (1 - x) ** 2
    D = D / jac[:, None]
    # Fejer's first quadrature rule on (-1, 1)
    m = np.arange(1, n // 2 + 1)
    fejer = (2.0 / n) * (
        1 - 2 * np.sum(np.cos(2 * m[None, :] * theta[:, None]) / (4 * m[None, :] ** 2 - 1), axis=1)
    )
    quad = fejer * jac
    order = np.argsort(r)
    return HalfLineGrid(
        n=int(n), map_scale=L,
        nodes=r[order], diff=D[order][:, order], quad=quad[order],
    )


def resample(grid, profile):
    """Profile coefficients on the grid: (v_i, u_i, f_i) with
    f = mass - (v^2 - u^2)."""
    v, u = evaluate_profile(profile, grid.nodes)
    f = profile.mass - (v * v - u * u)
    return v, u, f
