"""X-invariant distributions on M.

Two families are built:

* lifts of finite-order distributions on V (density plus Dirac atoms),
  paired with the class ``(c, h)`` of a test function through
  ``<T, h> + c <T, 1>``;
* period-normalised averages over the two closed orbits.

Both vanish on every divergence ``X f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .fields import FieldM, FieldV, apply_X
from .geometry import HopfModel, TransversalPoint
from .grids import GridSpec, v_grid
from .pipeline import ObstructionClass, obstruction, orbit_integral

__all__ = [
    "DistributionV",
    "InvariantDistributionM",
    "lift_distribution",
    "orbit_distribution",
    "xstar",
    "random_density",
]


@dataclass
class DistributionV:
    """``<T, h> = mean_V(density * h) + sum_i weight_i h(v_i)``."""

    density: Optional[FieldV] = None
    atoms: Sequence[tuple] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.density is None and not self.atoms:
            raise ValueError("a distribution needs a density or at least one atom")
        for point, weight in self.atoms:
            if not isinstance(point, TransversalPoint):
                raise TypeError("atoms must be (TransversalPoint, weight) pairs")
            if not np.isfinite(weight):
                raise ValueError("atom weights must be finite")

    def __add__(self, other: "DistributionV") -> "DistributionV":
        if self.density is not None and other.density is not None:
            d1, d2 = self.density, other.density
            density = FieldV(lambda u, th: d1.at(u, th) + d2.at(u, th))
        else:
            density = self.density if self.density is not None else other.density
        return DistributionV(density, list(self.atoms) + list(other.atoms))

    def pair(self, h: FieldV, n: int, grid: GridSpec = GridSpec(), samples=None):
        """Pair with ``h``; ``samples`` optionally gives ``h`` on the V-grid."""
        total = 0.0
        if self.density is not None:
            u, th, w = v_grid(n, grid)
            hv = h.at(u, th) if samples is None else samples
            total = total + np.sum(w * self.density.at(u, th) * hv)
        for point, weight in self.atoms:
            total = total + weight * np.asarray(h(point)).reshape(-1)[0]
        return complex(total)

    def mass(self, n: int, grid: GridSpec = GridSpec()) -> complex:
        return self.pair(FieldV(lambda u, th: np.ones(np.shape(th))), n, grid)


@dataclass
class InvariantDistributionM:
    """Distribution on M given by its action on obstruction classes."""

    on_class: Callable[[ObstructionClass], complex]
    m: HopfModel
    grid: GridSpec = GridSpec()
    name: str = ""
    direct: Optional[Callable[[FieldM], complex]] = None

    def pairing(self, phi: FieldM) -> complex:
        if self.direct is not None:
            return self.direct(phi)
        return self.on_class(obstruction(phi, self.m, self.grid))

    def pair_class(self, obs: ObstructionClass) -> complex:
        return self.on_class(obs)


def lift_distribution(T: DistributionV, m: HopfModel, grid: GridSpec = GridSpec(), name: str = "") -> InvariantDistributionM:
    """X-invariant distribution ``phi -> <T, h_phi> + c_phi <T, 1>``."""
    mass = T.mass(m.n, grid)

    def on_class(obs: ObstructionClass) -> complex:
        samples = None
        if obs.h_grid and obs.h_grid[2].size == v_grid(m.n, grid)[2].size:
            samples = obs.h_grid[2]
        return T.pair(obs.h, m.n, grid, samples) + obs.c * mass

    return InvariantDistributionM(on_class, m, grid, name or "lift")


def orbit_distribution(sign: int, m: HopfModel) -> InvariantDistributionM:
    """Average of ``phi`` over one period of the closed orbit ``F_+`` or ``F_-``."""
    period = m.period

    def direct(phi: FieldM) -> complex:
        return orbit_integral(phi, sign, m) / period

    def on_class(obs: ObstructionClass) -> complex:
        return (obs.I_plus if sign > 0 else obs.I_minus) / period

    return InvariantDistributionM(on_class, m, name=f"orbit{'+' if sign > 0 else '-'}", direct=direct)


def xstar(T: InvariantDistributionM, phi: FieldM) -> complex:
    """``<X T, phi> = -<T, X phi>``."""
    return -T.pairing(apply_X(phi, T.m))


def random_density(n: int, seed: int, modes: int = 2) -> FieldV:
    """Seeded smooth density on V: low-degree polynomial in u times Fourier modes."""
    rng = np.random.default_rng(seed)
    c0 = float(rng.normal())
    lin = rng.normal(size=n)
    cos_c = rng.normal(size=modes)
    sin_c = rng.normal(size=modes)
    mix = float(rng.normal())

    def func(u, th):
        u = np.asarray(u, dtype=float)
        th = np.asarray(th, dtype=float)
        out = c0 + u @ lin
        for j in range(modes):
            out = out + cos_c[j] * np.cos(2 * np.pi * (j + 1) * th) + sin_c[j] * np.sin(2 * np.pi * (j + 1) * th)
        return out + mix * u[..., 0] * np.cos(2 * np.pi * th)

    return FieldV(func)
