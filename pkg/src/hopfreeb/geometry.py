"""Cover, quotient and transversal of the Hopf manifold S^n x S^1.

The cover is ``E x R minus the origin`` with coordinates ``(z, t)``, ``z`` in
R^n.  The generator ``gamma(z, t) = (lam z, lam t)`` acts freely; the quotient
is charted by ``(w, theta)`` with ``w = (z, t)/r`` on S^n and
``theta = frac(ln r / ln lam)``.  The fundamental domain used by :func:`lift`
is the shell ``lam < r <= 1``.

All functions accept batched points: ``z`` has shape ``(..., n)`` and ``t``
shape ``(...)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "HopfModel",
    "CoverPoint",
    "HopfPoint",
    "TransversalPoint",
    "FlowIntegrationError",
    "gamma",
    "gamma_inv",
    "project",
    "lift",
    "speed",
    "metric",
    "flow",
    "transversal_embed",
    "cover_radius",
    "project_arrays",
    "lift_arrays",
]

# Every U_+ leaf crosses t = +1 once, every U_- leaf crosses t = -1 once.
BASEPOINT_T = 1.0


class FlowIntegrationError(RuntimeError):
    """The adaptive integrator failed to advance the flow."""


def _radial_speed(z: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(z * z, axis=-1) + t * t)


@dataclass(frozen=True)
class HopfModel:
    """Global parameters of the affine Reeb flow on S^n x S^1.

    ``speed_fn`` may replace the default speed ``a = r`` by any positive
    function with ``a(lam z, lam t) = lam a(z, t)``.
    """

    n: int = 2
    lam: float = 0.5
    quad_tol: float = 1e-11
    fd_order: int = 4
    series_tol: float = 1e-10
    solve_tol: float = 1e-6
    speed_fn: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"lambda must lie in (0, 1), got {self.lam}")
        for name in ("quad_tol", "series_tol", "solve_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.fd_order < 2 or self.fd_order % 2:
            raise ValueError(f"fd_order must be even and >= 2, got {self.fd_order}")

    @property
    def log_lam(self) -> float:
        return float(np.log(self.lam))

    @property
    def period(self) -> float:
        """Length ``ln(1/lam)`` of one gamma-period in log-radius."""
        return -float(np.log(self.lam))

    def a(self, z: np.ndarray, t: np.ndarray) -> np.ndarray:
        if self.speed_fn is None:
            return _radial_speed(z, t)
        return self.speed_fn(z, t)


@dataclass(frozen=True)
class CoverPoint:
    """Point(s) ``(z, t)`` of the cover; ``z`` has trailing dimension n."""

    z: np.ndarray
    t: np.ndarray

    def __post_init__(self) -> None:
        z = np.asarray(self.z, dtype=float)
        t = np.asarray(self.t, dtype=float)
        if z.ndim == 0:
            raise ValueError("z must be a vector")
        if z.shape[:-1] != t.shape:
            raise ValueError(f"shape mismatch: z {z.shape} vs t {t.shape}")
        if np.any(_radial_speed(z, t) == 0):
            raise ValueError("the origin (0, 0) is not a point of the cover")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "t", t)

    @property
    def r(self) -> np.ndarray:
        return _radial_speed(self.z, self.t)


@dataclass(frozen=True)
class HopfPoint:
    """Point(s) ``(w, theta)`` of M = S^n x S^1, theta in [0, 1)."""

    w: np.ndarray
    theta: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.w, dtype=float)
        theta = np.asarray(self.theta, dtype=float)
        if w.shape[:-1] != theta.shape:
            raise ValueError(f"shape mismatch: w {w.shape} vs theta {theta.shape}")
        if np.any(np.abs(np.linalg.norm(w, axis=-1) - 1.0) > 1e-12):
            raise ValueError("w must be a unit vector")
        if np.any((theta < 0) | (theta >= 1)):
            raise ValueError("theta must lie in [0, 1)")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "theta", theta)


@dataclass(frozen=True)
class TransversalPoint:
    """Point(s) ``(u, theta)`` of the transversal V = S^{n-1} x S^1."""

    u: np.ndarray
    theta: np.ndarray

    def __post_init__(self) -> None:
        u = np.asarray(self.u, dtype=float)
        theta = np.asarray(self.theta, dtype=float)
        if u.shape[:-1] != theta.shape:
            raise ValueError(f"shape mismatch: u {u.shape} vs theta {theta.shape}")
        if np.any(np.abs(np.linalg.norm(u, axis=-1) - 1.0) > 1e-12):
            raise ValueError("u must be a unit vector")
        if np.any((theta < 0) | (theta >= 1)):
            raise ValueError("theta must lie in [0, 1)")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "theta", theta)


def cover_radius(z: np.ndarray, t: np.ndarray) -> np.ndarray:
    return _radial_speed(np.asarray(z, dtype=float), np.asarray(t, dtype=float))


def _frac(x: np.ndarray) -> np.ndarray:
    out = x - np.floor(x)
    # floor can leave exactly 1.0 after rounding of tiny negatives
    return np.where(out >= 1.0, 0.0, out)


def project_arrays(z, t, lam: float):
    """Array form of :func:`project`; returns ``(w, theta)``."""
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    r = _radial_speed(z, t)
    w = np.concatenate([z, t[..., None]], axis=-1) / r[..., None]
    theta = _frac(np.log(r) / np.log(lam))
    return w, theta


def lift_arrays(w, theta, lam: float):
    """Array form of :func:`lift`; returns ``(z, t)`` with ``lam < r <= 1``."""
    w = np.asarray(w, dtype=float)
    r = np.power(lam, np.asarray(theta, dtype=float))
    x = w * r[..., None]
    return x[..., :-1], x[..., -1]


def gamma(p: CoverPoint, m: HopfModel) -> CoverPoint:
    return CoverPoint(m.lam * p.z, m.lam * p.t)


def gamma_inv(p: CoverPoint, m: HopfModel) -> CoverPoint:
    return CoverPoint(p.z / m.lam, p.t / m.lam)


def project(p: CoverPoint, m: HopfModel) -> HopfPoint:
    w, theta = project_arrays(p.z, p.t, m.lam)
    return HopfPoint(w, theta)


def lift(q: HopfPoint, m: HopfModel) -> CoverPoint:
    z, t = lift_arrays(q.w, q.theta, m.lam)
    return CoverPoint(z, t)


def speed(p: CoverPoint, m: HopfModel) -> np.ndarray:
    return m.a(p.z, p.t)


def metric(p: CoverPoint, u, v, m: HopfModel) -> np.ndarray:
    """Conformal metric ``<u, v> / (|z|^2 + t^2)``; u, v in (dz, dt) coordinates."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.sum(u * v, axis=-1) / (p.r ** 2)


def transversal_embed(v: TransversalPoint, m: HopfModel) -> CoverPoint:
    r = np.power(m.lam, v.theta)
    return CoverPoint(v.u * r[..., None], np.zeros_like(v.theta))


def _flow_one(z: np.ndarray, t0: float, s: float, m: HopfModel, rtol: float) -> float:
    if s == 0.0:
        return t0
    if not np.any(z):
        # half-line leaves: a(0, t) = |t| a(0, sign t) by homogeneity
        sgn = np.sign(t0)
        a0 = float(m.a(z, np.asarray(sgn)))
        return float(t0 * np.exp(s * sgn * a0))

    def rhs(_s, y):
        return m.a(z, np.asarray(y[0]))[None]

    sol = solve_ivp(rhs, (0.0, s), [t0], method="DOP853", rtol=rtol, atol=1e-14 * (1 + abs(t0)))
    if sol.status != 0:
        raise FlowIntegrationError(f"flow integration failed at z={z}, t0={t0}, s={s}: {sol.message}")
    return float(sol.y[0, -1])


def flow(p: CoverPoint, s: float, m: HopfModel, rtol: float = 1e-10) -> CoverPoint:
    """Move along the leaves ``z = const`` for time ``s`` at speed ``a``.

    Half-line leaves use the exponential closed form; other leaves are
    integrated with an embedded Runge-Kutta pair.
    """
    z = np.atleast_2d(p.z)
    t = np.atleast_1d(p.t)
    out = np.array([_flow_one(zi, float(ti), float(s), m, rtol) for zi, ti in zip(z, t)])
    return CoverPoint(p.z.copy(), out.reshape(p.t.shape))
