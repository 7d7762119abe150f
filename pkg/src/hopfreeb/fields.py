"""Smooth scalar fields on M, on E, on E minus the origin and on V.

Fields are black-box vectorised evaluators.  A field on M is stored through
its lift to the cover, ``g~ = g o project``, which is gamma-invariant; a
leafwise 1-form ``g chi`` is stored as its coefficient ``g``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .geometry import HopfModel, HopfPoint, TransversalPoint, lift_arrays, project_arrays
from .grids import GridSpec, annulus_grid, v_grid
from .quadrature import QuadratureError, quad_segment

__all__ = [
    "FieldM",
    "FieldE",
    "FieldEStar",
    "FieldV",
    "DerivativeOrderError",
    "DomainError",
    "MAX_DERIVATIVE_ORDER",
    "multi_indices",
    "fd_weights",
    "fd_step",
    "derivative",
    "seminorm",
    "apply_X",
    "mean_V",
    "quad_segment",
    "QuadratureError",
]

MAX_DERIVATIVE_ORDER = 4

# step multiplier per total derivative order; keeps rounding error eps/h^|s| below ~1e-6
_ORDER_STEP_SCALE = (1.0, 1.0, 3.0, 10.0, 30.0)


class DerivativeOrderError(ValueError):
    """Requested derivative order exceeds the supported stencil order."""


class DomainError(ValueError):
    """A stencil would leave the domain of the field."""


def _binary(op, lhs, rhs):
    return lambda *args: op(lhs(*args), rhs(*args))


@dataclass(frozen=True)
class FieldM:
    """Smooth function on M, represented by its gamma-invariant lift.

    ``cover(z, t)`` evaluates the lift; ``dt(z, t)``, when given, is the
    analytic t-derivative of the lift.
    """

    cover: Callable[[np.ndarray, np.ndarray], np.ndarray]
    lam: float
    dt: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    name: str = ""

    @classmethod
    def from_chart(cls, func, lam: float, dt=None, name: str = "") -> "FieldM":
        """Field from an evaluator ``func(w, theta)`` on S^n x S^1."""

        def cover(z, t):
            return func(*project_arrays(z, t, lam))

        return cls(cover, lam, dt, name)

    @classmethod
    def constant(cls, value, lam: float) -> "FieldM":
        def cover(z, t):
            return np.full(np.shape(t), value, dtype=np.result_type(value, float))

        def dt(z, t):
            return np.zeros(np.shape(t))

        return cls(cover, lam, dt, f"{value}")

    def __call__(self, q: HopfPoint) -> np.ndarray:
        return self.at(q.w, q.theta)

    def at(self, w, theta) -> np.ndarray:
        z, t = lift_arrays(w, theta, self.lam)
        return self.cover(z, t)

    def _combine(self, other, op, dop):
        if isinstance(other, FieldM):
            dt = None
            if self.dt is not None and other.dt is not None:
                dt = dop(self, other)
            return FieldM(_binary(op, self.cover, other.cover), self.lam, dt)
        c = other
        return self._combine(FieldM.constant(c, self.lam), op, dop)

    def __add__(self, other):
        return self._combine(other, np.add, lambda f, g: _binary(np.add, f.dt, g.dt))

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract, lambda f, g: _binary(np.subtract, f.dt, g.dt))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        dt = None if self.dt is None else (lambda z, t: -self.dt(z, t))
        return FieldM(lambda z, t: -self.cover(z, t), self.lam, dt)

    def __mul__(self, other):
        if isinstance(other, FieldM):
            def dprod(f, g):
                return lambda z, t: f.dt(z, t) * g.cover(z, t) + f.cover(z, t) * g.dt(z, t)

            return self._combine(other, np.multiply, dprod)
        c = other
        dt = None if self.dt is None else (lambda z, t: c * self.dt(z, t))
        return FieldM(lambda z, t: c * self.cover(z, t), self.lam, dt)

    __rmul__ = __mul__


@dataclass(frozen=True)
class FieldE:
    """Function on E = R^n, smooth through the origin.

    ``deriv(s, z)`` optionally supplies the analytic multi-index derivative.
    """

    func: Callable[[np.ndarray], np.ndarray]
    deriv: Optional[Callable[[tuple, np.ndarray], np.ndarray]] = None
    smooth_at_origin: bool = field(default=True, init=False)

    def __call__(self, z) -> np.ndarray:
        return self.func(np.asarray(z, dtype=float))

    def __add__(self, other):
        if isinstance(other, (FieldE, FieldEStar)):
            cls = FieldE if type(self) is FieldE and type(other) is FieldE else FieldEStar
            return cls(lambda z: self(z) + other(z))
        return type(self)(lambda z: self(z) + other)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(lambda z: -self(z))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        return type(self)(lambda z: c * self(z))

    __rmul__ = __mul__


@dataclass(frozen=True)
class FieldEStar(FieldE):
    """Function on E minus the origin; no claim is made at z = 0."""

    smooth_at_origin: bool = field(default=False, init=False)


@dataclass(frozen=True)
class FieldV:
    """Function on V = S^{n-1} x S^1, evaluated as ``func(u, theta)``."""

    func: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def __call__(self, v: TransversalPoint) -> np.ndarray:
        return self.func(v.u, v.theta)

    def at(self, u, theta) -> np.ndarray:
        return self.func(np.asarray(u, dtype=float), np.asarray(theta, dtype=float))


def multi_indices(n: int, r: int):
    """All multi-indices ``s`` in N^n with ``|s| <= r``, ordered by length."""
    out = []
    for total in range(r + 1):
        for s in itertools.product(range(total + 1), repeat=n):
            if sum(s) == total:
                out.append(s)
    return out


@lru_cache(maxsize=None)
def fd_weights(order: int, accuracy: int = 4):
    """Central finite-difference offsets and weights for ``d^order/dx^order``."""
    if order == 0:
        return np.array([0.0]), np.array([1.0])
    npts = 2 * ((order + 1) // 2) - 1 + accuracy
    q = npts // 2
    offsets = np.arange(-q, q + 1, dtype=float)
    A = np.vander(offsets, npts, increasing=True).T
    rhs = np.zeros(npts)
    rhs[order] = math.factorial(order)
    w = np.linalg.solve(A, rhs)
    return offsets, w


def fd_step(z: np.ndarray, total_order: int) -> np.ndarray:
    """Step ``max(1e-4, 1e-3 |z|)`` scaled up for higher derivative orders."""
    base = np.maximum(1e-4, 1e-3 * np.linalg.norm(z, axis=-1))
    return base * _ORDER_STEP_SCALE[total_order]


def derivative(f: FieldE, s: Sequence[int], z, m: HopfModel | None = None) -> np.ndarray:
    """``D^s f`` at ``z`` (shape (..., n)) by iterated central differences."""
    s = tuple(int(si) for si in s)
    z = np.asarray(z, dtype=float)
    if len(s) != z.shape[-1]:
        raise ValueError(f"multi-index {s} does not match dimension {z.shape[-1]}")
    total = sum(s)
    if min(s) < 0:
        raise ValueError("multi-index entries must be non-negative")
    if total > MAX_DERIVATIVE_ORDER:
        raise DerivativeOrderError(f"|s| = {total} exceeds supported order {MAX_DERIVATIVE_ORDER}")
    if f.deriv is not None:
        return f.deriv(s, z)
    if total == 0:
        return f(z)
    accuracy = m.fd_order if m is not None else 4
    h = fd_step(z, total)
    stencils = [fd_weights(si, accuracy) for si in s]
    if not f.smooth_at_origin:
        reach = h * max(abs(o[0]) for o, _ in stencils) * math.sqrt(sum(si > 0 for si in s))
        if np.any(np.linalg.norm(z, axis=-1) <= reach):
            raise DomainError("stencil reaches the origin of E*")
    acc = 0.0
    for combo in itertools.product(*[list(zip(o, w)) for o, w in stencils]):
        weight = np.prod([c[1] for c in combo])
        offset = np.array([c[0] for c in combo])
        acc = acc + weight * f(z + h[..., None] * offset)
    return acc / h ** total


def seminorm(f: FieldE, k: int, r: int, m: HopfModel, grid: GridSpec = GridSpec()) -> float:
    """``sum_{|s| <= r} sup_{C_k} |D^s f|`` on the annulus ``lam^k <= |z| <= lam^-k``."""
    if k < 1 or r < 0:
        raise ValueError("need k >= 1 and r >= 0")
    pts = annulus_grid(m.n, m.lam, k, grid)
    total = 0.0
    for s in multi_indices(m.n, r):
        total += float(np.max(np.abs(derivative(f, s, pts, m))))
    return total


def _t_derivative(g: FieldM, z, t, accuracy: int):
    offsets, w = fd_weights(1, accuracy)
    keep = w != 0.0
    offsets, w = offsets[keep], w[keep]
    h = 1e-3 * np.sqrt(np.sum(z * z, axis=-1) + t * t)
    # one batched call so that z-only parts of g are shared across the stencil
    zz = np.broadcast_to(z, (offsets.size,) + z.shape)
    tt = t[None] + offsets.reshape((-1,) + (1,) * t.ndim) * h[None]
    vals = g.cover(zz, tt)
    return np.tensordot(w, vals, axes=1) / h


def apply_X(g: FieldM, m: HopfModel) -> FieldM:
    """The field ``X g``, lifted as ``a * d/dt g~``.

    Uses the analytic t-derivative of ``g`` when present, otherwise central
    differences in t with step ``1e-3 r`` (scale-covariant under gamma).
    """

    def cover(z, t):
        z = np.asarray(z, dtype=float)
        t = np.asarray(t, dtype=float)
        if g.dt is not None:
            d = g.dt(z, t)
        else:
            d = _t_derivative(g, z, t, m.fd_order)
        return m.a(z, t) * d

    name = f"X({g.name})" if g.name else ""
    return FieldM(cover, g.lam, None, name)


def mean_V(h: FieldV, n: int, grid: GridSpec = GridSpec()):
    """Average of ``h`` over V for the uniform sphere measure times d theta."""
    u, th, w = v_grid(n, grid)
    vals = h.at(u, th)
    return np.sum(w * vals)
