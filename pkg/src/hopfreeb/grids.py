"""Deterministic sample grids on spheres, on V, on M and on annuli of E.

Two kinds of sphere grids are used.  Quadrature grids carry weights of the
normalised uniform measure (Gauss-Jacobi in the polar angles, trapezoid in
the azimuth) and integrate low-degree polynomials exactly.  Sup grids place
nodes uniformly in every angle, poles included, so that coordinate axes are
hit when computing suprema.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

__all__ = [
    "GridSpec",
    "sphere_quadrature",
    "sphere_sup_grid",
    "v_grid",
    "m_grid",
    "annulus_grid",
]


@dataclass(frozen=True)
class GridSpec:
    """Grid resolutions.

    ``sphere_pts`` is the number of azimuthal nodes; every polar angle gets
    ``sphere_pts // 2`` nodes.  ``radial_layers`` is the number of geometric
    radial steps per factor ``1/lam`` on annuli.
    """

    sphere_pts: int = 16
    theta_pts: int = 16
    radial_layers: int = 8

    def __post_init__(self) -> None:
        for name in ("sphere_pts", "theta_pts", "radial_layers"):
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be >= 2")


def _hyperspherical(angles: list[np.ndarray]) -> np.ndarray:
    """Cartesian points from polar angles phi_1..phi_{d-2} and an azimuth."""
    *polar, azim = angles
    sin_prod = np.ones_like(azim)
    coords = []
    for phi in polar:
        coords.append(sin_prod * np.cos(phi))
        sin_prod = sin_prod * np.sin(phi)
    coords.append(sin_prod * np.cos(azim))
    coords.append(sin_prod * np.sin(azim))
    x = np.stack(coords, axis=-1)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def sphere_quadrature(dim: int, sphere_pts: int):
    """Nodes (N, dim) and weights (N,) on S^{dim-1}; weights sum to one."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    n_az = sphere_pts
    n_pol = max(2, sphere_pts // 2)
    azim = 2 * np.pi * np.arange(n_az) / n_az
    axes = []
    weights = []
    for j in range(dim - 2):
        # polar angle phi_j carries the density sin^(dim-2-j)
        power = dim - 2 - j
        alpha = 0.5 * (power - 1)
        x, wx = roots_jacobi(n_pol, alpha, alpha)
        axes.append(np.arccos(x[::-1]))
        weights.append(wx[::-1])
    axes.append(azim)
    weights.append(np.full(n_az, 1.0 / n_az))
    mesh = np.meshgrid(*axes, indexing="ij")
    wmesh = np.meshgrid(*weights, indexing="ij")
    pts = _hyperspherical([g.ravel() for g in mesh])
    w = np.prod(np.stack([g.ravel() for g in wmesh]), axis=0)
    return pts, w / w.sum()


def sphere_sup_grid(dim: int, sphere_pts: int) -> np.ndarray:
    """Directions on S^{dim-1}, uniform in each angle, axes included."""
    n_az = sphere_pts
    n_pol = max(3, sphere_pts // 2 + 1)
    azim = 2 * np.pi * np.arange(n_az) / n_az
    axes = [np.linspace(0.0, np.pi, n_pol) for _ in range(dim - 2)] + [azim]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = _hyperspherical([g.ravel() for g in mesh])
    # collapse the duplicate pole points
    return np.unique(np.round(pts, 15), axis=0)


def _theta_nodes(theta_pts: int) -> np.ndarray:
    return np.arange(theta_pts) / theta_pts


def v_grid(n: int, spec: GridSpec = GridSpec()):
    """Product quadrature on V = S^{n-1} x S^1: ``(u, theta, weights)``."""
    u, wu = sphere_quadrature(n, spec.sphere_pts)
    th = _theta_nodes(spec.theta_pts)
    U = np.repeat(u, th.size, axis=0)
    TH = np.tile(th, u.shape[0])
    W = np.repeat(wu, th.size) / th.size
    return U, TH, W


def m_grid(n: int, spec: GridSpec = GridSpec()):
    """Product quadrature on M = S^n x S^1: ``(w, theta, weights)``."""
    w, ww = sphere_quadrature(n + 1, spec.sphere_pts)
    th = _theta_nodes(spec.theta_pts)
    Wp = np.repeat(w, th.size, axis=0)
    TH = np.tile(th, w.shape[0])
    W = np.repeat(ww, th.size) / th.size
    return Wp, TH, W


def annulus_grid(n: int, lam: float, k: int, spec: GridSpec = GridSpec()) -> np.ndarray:
    """Points of the annulus ``lam^k <= |z| <= lam^-k``, shape (N, n).

    Radii are ``lam^(k - j/radial_layers)`` for ``j = 0..2 k radial_layers``,
    so both boundary spheres are sampled.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    dirs = sphere_sup_grid(n, spec.sphere_pts)
    L = spec.radial_layers
    radii = lam ** (k - np.arange(2 * k * L + 1) / L)
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, n)
