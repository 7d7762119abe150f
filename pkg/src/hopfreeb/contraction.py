"""The discrete cohomological equation ``f - f o gamma = g`` on E.

For the contraction ``gamma(z) = lam z`` a solution exists in C^inf(E) iff
``g(0) = 0``, and is the geometric series ``sum_k g(lam^k z)``.  The class of
``g`` in the first group cohomology is therefore the number ``g(0)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .fields import FieldE, FieldEStar, fd_step, fd_weights
from .geometry import HopfModel

__all__ = [
    "NecessaryConditionViolated",
    "LipschitzEstimateFailed",
    "SeriesSolution",
    "solve_contraction",
    "gamma_class",
    "log_cocycle",
    "lipschitz_bound",
    "ball_samples",
]

LIPSCHITZ_SAMPLES = 1000
# multiplier on the sampled Lipschitz constant before choosing the truncation
LIPSCHITZ_SAFETY = 2.0
MAX_TERMS = 400


class NecessaryConditionViolated(ValueError):
    """``|g(0)| > tol``: the series cannot converge to a smooth solution."""


class LipschitzEstimateFailed(RuntimeError):
    """Sampling produced no finite Lipschitz bound."""


@dataclass(frozen=True)
class SeriesSolution(FieldE):
    """Partial sum ``f_K(z) = sum_{k<K} g(lam^k z)``.

    ``tail_bound`` bounds ``|f - f_K|`` on the ball of radius ``radius``.
    """

    g: FieldE = None
    lam: float = 0.5
    K: int = 0
    radius: float = 1.0
    lipschitz: float = 0.0
    tail_bound: float = 0.0

    @classmethod
    def build(cls, g: FieldE, lam: float, K: int, radius: float = 1.0, lipschitz: float = 0.0):
        scales = lam ** np.arange(K)

        def func(z):
            z = np.asarray(z, dtype=float)
            pts = scales.reshape((K,) + (1,) * z.ndim) * z[None]
            return np.sum(g(pts), axis=0)

        tail = lipschitz * radius * lam ** K / (1.0 - lam)
        return cls(func, None, g, lam, K, radius, lipschitz, tail)


def ball_samples(n: int, radius: float, count: int = LIPSCHITZ_SAMPLES) -> np.ndarray:
    """Deterministic quasi-random points filling the closed ball of radius ``radius``."""
    sampler = qmc.Halton(d=n + 1, scramble=False)
    u = sampler.random(count + 1)[1:]
    # Halton coordinates -> direction (via normal quantiles) and radius
    g = ndtri(np.clip(u[:, :n], 1e-12, 1 - 1e-12))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    dirs = g / np.where(norms > 0, norms, 1.0)
    rad = radius * u[:, n:] ** (1.0 / n)
    return dirs * rad


def lipschitz_bound(g: FieldE, n: int, radius: float, accuracy: int = 4) -> float:
    """Sampled bound on ``sup |g(z) - g(0)| / |z|`` over the ball.

    Combines difference quotients at quasi-random points with the norm of
    finite-difference gradients at the same points.
    """
    pts = ball_samples(n, radius)
    g0 = g(np.zeros(n))
    vals = g(pts)
    quot = np.abs(vals - g0) / np.linalg.norm(pts, axis=1)
    offsets, w = fd_weights(1, accuracy)
    h = fd_step(pts, 1)
    grad_sq = np.zeros(pts.shape[0])
    for i in range(n):
        acc = 0.0
        for o, wi in zip(offsets, w):
            if wi != 0.0:
                shifted = pts.copy()
                shifted[:, i] += o * h
                acc = acc + wi * g(shifted)
        grad_sq = grad_sq + np.abs(acc / h) ** 2
    L = max(float(np.max(quot)), float(np.sqrt(np.max(grad_sq))))
    if not np.isfinite(L):
        raise LipschitzEstimateFailed("non-finite values while sampling the Lipschitz bound")
    return L


def solve_contraction(g: FieldE, R: float, tol: float, m: HopfModel) -> SeriesSolution:
    """Truncated series solution of ``f(z) - f(lam z) = g(z)`` on ``|z| <= R``.

    ``K`` is the least integer with ``L R lam^K / (1 - lam) <= tol`` for a
    sampled Lipschitz constant ``L`` (with a safety factor).
    """
    g0 = complex(np.asarray(g(np.zeros(m.n))))
    if abs(g0) > tol:
        raise NecessaryConditionViolated(f"|g(0)| = {abs(g0):.3e} exceeds tol = {tol:.3e}")
    L = LIPSCHITZ_SAFETY * lipschitz_bound(g, m.n, R, m.fd_order)
    if L == 0.0:
        K = 1
    else:
        K = int(np.ceil(np.log(tol * (1.0 - m.lam) / (L * R)) / np.log(m.lam)))
        K = max(K, 1)
    if K > MAX_TERMS:
        raise LipschitzEstimateFailed(f"truncation K={K} exceeds {MAX_TERMS}; Lipschitz bound {L:.3e}")
    return SeriesSolution.build(g, m.lam, K, R, L)


def gamma_class(g: FieldE, n: int) -> complex:
    """Coordinate of ``[g]`` in ``H^1(Gamma, C^inf(E))``, which is ``g(0)``."""
    val = np.asarray(g(np.zeros((1, n))))
    return complex(val.reshape(-1)[0])


def log_cocycle(m: HopfModel) -> FieldEStar:
    """``l(z) = ln|z| / ln(1/lam)``, so that ``l(z) - l(lam z) = 1``."""
    scale = 1.0 / np.log(1.0 / m.lam)

    def func(z):
        return np.log(np.linalg.norm(z, axis=-1)) * scale

    return FieldEStar(func)
