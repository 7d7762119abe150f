"""Obstruction to ``X f = g`` and reconstruction of ``f`` when it vanishes.

Route on the cover, for ``g~ = g o project`` and the speed ``a``:

1. Leafwise primitives ``f_+(z, t) = int_1^t g~/a`` on ``U_+`` (everything off
   the negative half-line) and ``f_-(z, t) = int_{-1}^t g~/a`` on ``U_-``.
   Their difference on the overlap is the basic function
   ``b(z) = f_- - f_+ = int_{-1}^{1} g~/a`` on E*.
2. ``e(z) = b(lam z) - b(z)`` equals the two windows
   ``int_1^{1/lam} + int_{-1/lam}^{-1}`` of ``g~/a``, smooth through 0, and
   ``c = e(0)`` is the closed-orbit sum ``I_+ + I_-``.
3. ``v`` solves ``v - v o gamma = c - e``; then ``b - v + c l`` (``l`` the
   log cocycle) is gamma-invariant and descends to ``h0`` on V.
4. If ``c`` and the oscillation of ``h0`` vanish, ``q = v + mean(h0)``
   extends ``b`` smoothly over 0, the primitives glue to ``F~`` (``f_-`` on
   ``U_-``, ``f_+ + q`` on ``U_+``) and the defect ``F~ o gamma - F~`` is a
   function ``d~(z)`` on E whose value ``d = d~(0)`` is the last obstruction.
5. If also ``d = 0``, ``w`` solves ``w - w o gamma = d~ - d`` and
   ``F~ + w`` is gamma-invariant: it descends to the solution.

Line integrals use ``s = |z| sinh(tau)`` off the axis and ``s = +-e^u`` on
it, so the integrands stay O(1) as ``|z| -> 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .contraction import SeriesSolution, log_cocycle, solve_contraction
from .fields import DomainError, FieldE, FieldEStar, FieldM, FieldV, apply_X
from .geometry import BASEPOINT_T, HopfModel
from .grids import GridSpec, m_grid, v_grid
from .quadrature import quad_batch

__all__ = [
    "ObstructionClass",
    "SolveReport",
    "line_integral",
    "coboundary_gap",
    "invariance_defect",
    "orbit_integral",
    "obstruction",
    "solve_cohomological_equation",
    "verify_solution",
]

# largest initial panel (in tau or log-radius) handed to the adaptive rule
_MAX_PANEL = 1.0


def line_integral(g: FieldM, m: HopfModel, z, t0, t1) -> np.ndarray:
    """``int_{t0}^{t1} (g~/a)(z, s) ds`` along the leaves through ``z``.

    On the axis ``z = 0`` the segment must not contain ``t = 0``.
    """
    z = np.asarray(z, dtype=float)
    shape = z.shape[:-1]
    n = z.shape[-1]
    z = z.reshape(-1, n)
    t0 = np.broadcast_to(np.asarray(t0, dtype=float), shape).ravel()
    t1 = np.broadcast_to(np.asarray(t1, dtype=float), shape).ravel()
    rho = np.linalg.norm(z, axis=1)
    out = None
    plain_speed = m.speed_fn is None

    off = np.flatnonzero(rho > 0)
    on = np.flatnonzero(rho == 0)
    if on.size and np.any((np.sign(t0[on]) != np.sign(t1[on])) | (t0[on] == 0) | (t1[on] == 0)):
        raise DomainError("segment on the axis z = 0 passes through the origin")

    results = []
    if off.size:
        zo, ro = z[off], rho[off]

        def integrand(tau, k):
            zz = np.broadcast_to(zo[k][:, None, :], tau.shape + (n,))
            s = ro[k][:, None] * np.sinh(tau)
            val = g.cover(zz, s)
            if not plain_speed:
                val = val * (ro[k][:, None] * np.cosh(tau)) / m.a(zz, s)
            return val

        vals, _ = quad_batch(
            integrand, np.arcsinh(t0[off] / ro), np.arcsinh(t1[off] / ro), m.quad_tol, max_panel=_MAX_PANEL
        )
        results.append((off, vals))
    if on.size:
        sgn = np.sign(t0[on])

        def integrand_axis(u, k):
            zz = np.zeros(u.shape + (n,))
            s = sgn[k][:, None] * np.exp(u)
            val = g.cover(zz, s)
            if not plain_speed:
                val = val * np.exp(u) / m.a(zz, s)
            return sgn[k][:, None] * val

        vals, _ = quad_batch(
            integrand_axis, np.log(np.abs(t0[on])), np.log(np.abs(t1[on])), m.quad_tol, max_panel=_MAX_PANEL
        )
        results.append((on, vals))

    dtype = np.result_type(*[v.dtype for _, v in results]) if results else float
    out = np.zeros(z.shape[0], dtype=dtype)
    for idx, vals in results:
        out[idx] = vals
    return out.reshape(shape)


def _unique_rows_eval(func, z: np.ndarray) -> np.ndarray:
    """Evaluate ``func`` once per distinct row of ``z``."""
    z = np.asarray(z, dtype=float)
    shape = z.shape[:-1]
    flat = z.reshape(-1, z.shape[-1])
    uniq, inv = np.unique(flat, axis=0, return_inverse=True)
    vals = np.asarray(func(uniq))
    return vals[inv.ravel()].reshape(shape)


def coboundary_gap(g: FieldM, m: HopfModel) -> FieldEStar:
    """Basic difference ``b(z) = int_{-1}^{1} (g~/a)(z, s) ds`` of the two primitives."""

    def func(z):
        z = np.asarray(z, dtype=float)
        if np.any(np.linalg.norm(z, axis=-1) == 0):
            raise DomainError("b is not defined at z = 0")
        return line_integral(g, m, z, -BASEPOINT_T, BASEPOINT_T)

    return FieldEStar(func)


def _window(g: FieldM, m: HopfModel, sign: int) -> FieldE:
    lo, hi = BASEPOINT_T, BASEPOINT_T / m.lam
    if sign < 0:
        lo, hi = -hi, -lo

    def func(z):
        return line_integral(g, m, z, lo, hi)

    return FieldE(func)


def invariance_defect(b: Optional[FieldEStar], g: FieldM, m: HopfModel):
    """Return ``(e, c)`` with ``e(z) = b(lam z) - b(z)`` and ``c = e(0)``.

    ``e`` is computed from its window form, which is smooth through 0.  When
    ``b`` is given, the window form is checked against it at one point.
    """
    plus = _window(g, m, +1)
    minus = _window(g, m, -1)

    def func(z):
        return plus(z) + minus(z)

    e = FieldE(func)
    c = complex(np.asarray(e(np.zeros((1, m.n))))[0])
    if b is not None:
        z0 = np.zeros((1, m.n))
        z0[0, 0] = 1.0
        gap = np.asarray(b(m.lam * z0) - b(z0) - e(z0))[0]
        if abs(gap) > 1e-6 * max(1.0, abs(c)):
            raise RuntimeError(f"b(lam z) - b(z) disagrees with the window form by {abs(gap):.3e}")
    return e, c


def orbit_integral(g: FieldM, sign: int, m: HopfModel) -> complex:
    """Integral of ``g~/a`` over one gamma-period of the closed orbit on the
    positive (``sign=+1``) or negative (``sign=-1``) half-line."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    lo, hi = BASEPOINT_T, BASEPOINT_T / m.lam
    if sign < 0:
        lo, hi = -hi, -lo
    val = line_integral(g, m, np.zeros((1, m.n)), lo, hi)[0]
    return complex(val)


@dataclass
class _Pipeline:
    g: FieldM
    b: FieldEStar
    e: FieldE
    v: SeriesSolution
    descended: FieldEStar
    global_primitive: Optional[object] = None
    defect: Optional[FieldE] = None
    q: Optional[FieldE] = None


@dataclass
class ObstructionClass:
    """Class of ``g`` in leafwise H^1.

    ``h`` is the mean-zero representative of the transversal part; the
    removed constant is ``h_mean``.  ``d`` is only set when ``c`` and the
    oscillation of the transversal part are below ``tol``.
    """

    c: complex
    h: FieldV
    h_mean: complex
    oscillation: float
    d: Optional[complex]
    I_plus: complex
    I_minus: complex
    tol: float
    h_grid: tuple = field(repr=False, default=())
    diagnostics: dict = field(default_factory=dict)
    parts: Optional[_Pipeline] = field(default=None, repr=False)

    @property
    def transversal_vanishes(self) -> bool:
        return abs(self.c) <= self.tol and self.oscillation <= self.tol

    @property
    def vanishes(self) -> bool:
        return self.transversal_vanishes and self.d is not None and abs(self.d) <= self.tol


@dataclass
class SolveReport:
    solution: Optional[FieldM]
    obstruction: ObstructionClass
    residual: Optional[float] = None

    @property
    def solvable(self) -> bool:
        return self.solution is not None


def _oscillation(vals: np.ndarray) -> float:
    vals = np.asarray(vals)
    if np.iscomplexobj(vals):
        return float(np.hypot(np.ptp(vals.real), np.ptp(vals.imag)))
    return float(np.ptp(vals))


def _primitive(g: FieldM, m: HopfModel, q: FieldE):
    """Glued primitive ``F~``: ``f_+ + q`` inside the cone ``t > |z|``, else ``f_-``."""

    def F(z, t):
        z = np.asarray(z, dtype=float)
        t = np.asarray(t, dtype=float)
        rho = np.linalg.norm(z, axis=-1)
        upper = t > rho
        out = np.zeros(t.shape, dtype=complex)
        if np.any(~upper):
            out[~upper] = line_integral(g, m, z[~upper], -BASEPOINT_T, t[~upper])
        if np.any(upper):
            zu = z[upper]
            out[upper] = line_integral(g, m, zu, BASEPOINT_T, t[upper]) + _unique_rows_eval(q, zu)
        return out

    return F


def obstruction(g: FieldM, m: HopfModel, grid: GridSpec = GridSpec()) -> ObstructionClass:
    """Compute ``(c, h, d)`` for ``g`` following the module-level route."""
    b = coboundary_gap(g, m)
    e, c = invariance_defect(None, g, m)
    I_plus = orbit_integral(g, +1, m)
    I_minus = orbit_integral(g, -1, m)

    c_val = c

    def rhs(z):
        return c_val - e(z)

    v = solve_contraction(FieldE(rhs), 1.0, m.series_tol, m)
    ell = log_cocycle(m)

    def descended(z):
        return b(z) - v(z) + c_val * ell(z)

    b2 = FieldEStar(descended)
    u, th, wts = v_grid(m.n, grid)
    z_grid = u * (m.lam ** th)[:, None]
    h0 = np.asarray(b2(z_grid))
    h_mean = complex(np.sum(wts * h0))
    osc = _oscillation(h0)
    if not np.iscomplexobj(h0):
        h_mean = h_mean.real

    def h_func(uu, tt):
        uu = np.asarray(uu, dtype=float)
        tt = np.asarray(tt, dtype=float)
        return b2(uu * (m.lam ** tt)[..., None]) - h_mean

    parts = _Pipeline(g, b, e, v, b2)
    diagnostics = {
        "quad_tol": m.quad_tol,
        "series_tol": m.series_tol,
        "series_terms": v.K,
        "sphere_pts": grid.sphere_pts,
        "theta_pts": grid.theta_pts,
        "v_grid_size": int(h0.size),
    }
    d = None
    tol = m.solve_tol
    if abs(c) <= tol and osc <= tol:
        def q_func(z):
            return v(z) + h_mean

        q = FieldE(q_func)
        F = _primitive(g, m, q)

        def defect(z):
            z = np.asarray(z, dtype=float)
            t_star = np.full(z.shape[:-1], -BASEPOINT_T / m.lam)
            return F(m.lam * z, m.lam * t_star) - F(z, t_star)

        origin = np.zeros((1, m.n))
        d = complex(defect(origin)[0])
        one = np.full(1, BASEPOINT_T / m.lam)
        d_upper = complex((F(origin, m.lam * one) - F(origin, one))[0])
        diagnostics["d_upper_route"] = d_upper
        parts.global_primitive = F
        parts.defect = FieldE(defect)
        parts.q = q

    return ObstructionClass(
        c=c,
        h=FieldV(h_func),
        h_mean=h_mean,
        oscillation=osc,
        d=d,
        I_plus=I_plus,
        I_minus=I_minus,
        tol=tol,
        h_grid=(u, th, h0 - h_mean),
        diagnostics=diagnostics,
        parts=parts,
    )


def _real_if_close(x, tol=0.0):
    x = np.asarray(x)
    if np.iscomplexobj(x) and np.all(np.abs(x.imag) <= tol):
        return x.real
    return x


def solve_cohomological_equation(
    g: FieldM, m: HopfModel, grid: GridSpec = GridSpec(), obs: Optional[ObstructionClass] = None
) -> SolveReport:
    """Solve ``X f = g`` when the obstruction vanishes; ``f`` has mean zero on M."""
    if obs is None:
        obs = obstruction(g, m, grid)
    if not obs.vanishes:
        return SolveReport(None, obs, None)
    parts = obs.parts
    d = obs.d
    defect = parts.defect

    def shifted(z):
        return defect(z) - d

    w = solve_contraction(FieldE(shifted), 1.0, m.series_tol, m)
    F = parts.global_primitive
    real = not np.iscomplexobj(np.asarray(g.cover(np.ones((1, m.n)), np.ones(1))))

    def raw(z, t):
        val = F(z, t) + _unique_rows_eval(w, z)
        return _real_if_close(val, np.inf) if real else val

    W, TH, WT = m_grid(m.n, grid)
    mean = np.sum(WT * FieldM(raw, m.lam).at(W, TH))

    def cover(z, t):
        return raw(z, t) - mean

    sol = FieldM(cover, m.lam, None, f"solution({g.name})" if g.name else "solution")
    residual = verify_solution(sol, g, m, grid)
    obs.diagnostics["solution_series_terms"] = w.K
    return SolveReport(sol, obs, residual)


def verify_solution(f: FieldM, g: FieldM, m: HopfModel, grid: GridSpec = GridSpec()) -> float:
    """``sup |X f - g|`` over the product grid on M."""
    W, TH, _ = m_grid(m.n, grid)
    diff = apply_X(f, m).at(W, TH) - g.at(W, TH)
    return float(np.max(np.abs(diff)))
