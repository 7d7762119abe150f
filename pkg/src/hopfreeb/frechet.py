"""Seminorm diagnostics on C^inf(E minus 0).

The pair ``f = phi(|z|^2)`` and ``f_p = phi(|z|^2 + 1/p)`` gives smooth
functions on E converging, in every seminorm of E minus 0, to a function that
need not extend smoothly through the origin.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Union

import numpy as np

from .fields import (
    FieldE,
    FieldEStar,
    derivative,
    multi_indices,
    seminorm,
)
from .geometry import HopfModel
from .grids import GridSpec, sphere_sup_grid

__all__ = [
    "PowerProfile",
    "AppendixProfile",
    "PROFILES",
    "appendix_pair",
    "convergence_table",
    "nonsmoothness_witness",
    "chain_rule_terms",
    "write_csv",
    "CONVERGENCE_HEADER",
    "WITNESS_HEADER",
]

CONVERGENCE_HEADER = ("k", "r", "p", "rho", "p_times_rho")
WITNESS_HEADER = ("j", "radius", "sup_derivative")


@dataclass(frozen=True)
class PowerProfile:
    """``phi(t) = t**alpha`` with closed-form derivatives."""

    alpha: float
    name: str = ""

    def __call__(self, t):
        return np.asarray(t, dtype=float) ** self.alpha

    def derivative(self, order: int, t):
        coef = 1.0
        for j in range(order):
            coef *= self.alpha - j
        if coef == 0.0:
            return np.zeros(np.shape(t))
        return coef * np.asarray(t, dtype=float) ** (self.alpha - order)


PROFILES = {
    "sqrt": PowerProfile(0.5, "sqrt"),
    "inv": PowerProfile(-1.0, "inv"),
    "t": PowerProfile(1.0, "t"),
    "t2": PowerProfile(2.0, "t2"),
}


@dataclass(frozen=True)
class AppendixProfile:
    phi: Union[PowerProfile, Callable] = PROFILES["sqrt"]
    p_max: int = 64
    k_list: Sequence[int] = (1, 2, 3)
    r_list: Sequence[int] = (0, 1, 2)

    def __post_init__(self):
        if isinstance(self.phi, str):
            if self.phi not in PROFILES:
                raise ValueError(f"unknown profile {self.phi!r}; choose from {sorted(PROFILES)}")
            object.__setattr__(self, "phi", PROFILES[self.phi])
        if self.p_max < 4:
            raise ValueError("p_max must be at least 4")
        if any(k < 1 for k in self.k_list) or any(r < 0 for r in self.r_list):
            raise ValueError("need k >= 1 and r >= 0")

    @property
    def analytic(self) -> bool:
        return hasattr(self.phi, "derivative")


@lru_cache(maxsize=None)
def chain_rule_terms(s: tuple) -> tuple:
    """``D^s [phi(|z|^2)] = sum coeff * z**alpha * phi^(l)(|z|^2)``.

    Returns a tuple of ``(coeff, alpha, l)``.
    """
    n = len(s)
    terms = {((0,) * n, 0): 1.0}
    for i, si in enumerate(s):
        for _ in range(si):
            new: dict = {}
            for (alpha, ell), c in terms.items():
                if alpha[i] > 0:
                    a = list(alpha)
                    a[i] -= 1
                    key = (tuple(a), ell)
                    new[key] = new.get(key, 0.0) + c * alpha[i]
                a = list(alpha)
                a[i] += 1
                key = (tuple(a), ell + 1)
                new[key] = new.get(key, 0.0) + 2.0 * c
            terms = new
    return tuple((c, alpha, ell) for (alpha, ell), c in sorted(terms.items()) if c != 0.0)


def _radial_field(phi, shift: float, cls):
    def func(z):
        z = np.asarray(z, dtype=float)
        return phi(np.sum(z * z, axis=-1) + shift)

    if not hasattr(phi, "derivative"):
        return cls(func)

    def deriv(s, z):
        z = np.asarray(z, dtype=float)
        q = np.sum(z * z, axis=-1) + shift
        out = np.zeros(q.shape)
        for c, alpha, ell in chain_rule_terms(tuple(s)):
            mono = np.prod(z ** np.asarray(alpha, dtype=float), axis=-1)
            out = out + c * mono * phi.derivative(ell, q)
        return out

    return cls(func, deriv)


def appendix_pair(profile: AppendixProfile, p: int, m: HopfModel):
    """``(f, f_p)`` with ``f = phi(|z|^2)`` and ``f_p = phi(|z|^2 + 1/p)``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    f = _radial_field(profile.phi, 0.0, FieldEStar)
    fp = _radial_field(profile.phi, 1.0 / p, FieldE)
    return f, fp


def _difference(fp: FieldE, f: FieldE) -> FieldEStar:
    deriv = None
    if fp.deriv is not None and f.deriv is not None:
        deriv = lambda s, z: fp.deriv(s, z) - f.deriv(s, z)  # noqa: E731
    return FieldEStar(lambda z: fp(z) - f(z), deriv)


def convergence_table(profile: AppendixProfile, m: HopfModel, grid: GridSpec = GridSpec()):
    """Rows ``(k, r, p, rho_{k,r}(f_p - f), p * rho)`` ordered by k, r, p."""
    rows = []
    for k in profile.k_list:
        for r in profile.r_list:
            for p in range(1, profile.p_max + 1):
                f, fp = appendix_pair(profile, p, m)
                rho = seminorm(_difference(fp, f), k, r, m, grid)
                rows.append((k, r, p, rho, p * rho))
    return rows


def nonsmoothness_witness(
    f: FieldE, m: HopfModel, layers: int = 8, order: int = 2, grid: GridSpec = GridSpec()
):
    """Rows ``(j, lam**j, sup_{|z| = lam**j} max_{|s| = order} |D^s f|)``.

    With ``order=2`` this is the size of the Hessian of ``f`` on shrinking
    spheres; it is bounded iff ``f`` has bounded second derivatives near 0.
    """
    dirs = sphere_sup_grid(m.n, grid.sphere_pts)
    index = [s for s in multi_indices(m.n, order) if sum(s) == order]
    rows = []
    for j in range(1, layers + 1):
        radius = m.lam ** j
        pts = radius * dirs
        sup = 0.0
        for s in index:
            sup = max(sup, float(np.max(np.abs(derivative(f, s, pts, m)))))
        rows.append((j, radius, sup))
    return rows


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_csv(path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([x if isinstance(x, str) else _fmt(x) for x in row])
