"""Acceptance battery: nine property checks at desk scale.

Each ``criterion_*`` function returns a list of :class:`CheckResult`; a
criterion passes when all of its checks pass.  ``run_all`` prints one line per
criterion.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .atlas import builtin_names, field_from_spec, random_trigpoly
from .contraction import NecessaryConditionViolated, ball_samples, solve_contraction
from .distributions import (
    DistributionV,
    lift_distribution,
    orbit_distribution,
    random_density,
)
from .fields import FieldE, FieldM, FieldV, apply_X
from .frechet import AppendixProfile, appendix_pair, convergence_table, nonsmoothness_witness
from .geometry import CoverPoint, HopfModel, TransversalPoint, flow, gamma, metric, project
from .grids import GridSpec, m_grid
from .pipeline import obstruction, solve_cohomological_equation

__all__ = ["CheckResult", "CRITERIA", "run_criterion", "run_all"]

LN2 = math.log(2.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float = float("nan")
    bound: float = float("nan")
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"  [{tag}] {self.name}: value={self.value:.3e} bound={self.bound:.3e} {self.detail}".rstrip()


def _check(name, value, bound, detail="", strict=True) -> CheckResult:
    value = float(value)
    ok = bool(np.isfinite(value) and (value < bound if strict else value <= bound))
    return CheckResult(name, ok, value, bound, detail)


def _model(n=2, lam=0.5, **kw) -> HopfModel:
    return HopfModel(n=n, lam=lam, **kw)


def _sup_mod_const(f1: FieldM, f2: FieldM, m: HopfModel, grid: GridSpec) -> float:
    """``sup |f1 - f2 - mean(f1 - f2)|`` on the M-grid."""
    W, TH, WT = m_grid(m.n, grid)
    diff = np.asarray(f1.at(W, TH) - f2.at(W, TH))
    return float(np.max(np.abs(diff - np.sum(WT * diff))))


def random_coboundary(m: HopfModel, seed: int):
    """``(f, X f)`` for a seeded random trigonometric polynomial ``f``."""
    f = random_trigpoly(m.n, seed).to_field(m, name=f"random:{seed}")
    return f, apply_X(f, m)


# 1 -------------------------------------------------------------------------

def criterion_1(m: HopfModel | None = None, grid: GridSpec = GridSpec(), seeds=range(1, 11)):
    """Coboundaries of random smooth fields are detected and solved."""
    m = m or _model()
    out = []
    for seed in seeds:
        f, g = random_coboundary(m, seed)
        obs = obstruction(g, m, grid)
        out.append(_check(f"seed {seed} |c|", abs(obs.c), 1e-6))
        out.append(_check(f"seed {seed} osc(h)", obs.oscillation, 1e-5))
        out.append(_check(f"seed {seed} |d|", abs(obs.d) if obs.d is not None else np.inf, 1e-6))
        rep = solve_cohomological_equation(g, m, grid, obs=obs)
        if rep.solution is None:
            out.append(CheckResult(f"seed {seed} solve", False, detail="reported unsolvable"))
            continue
        out.append(_check(f"seed {seed} sup|f'-f-const|", _sup_mod_const(rep.solution, f, m, grid), 1e-5))
        out.append(_check(f"seed {seed} residual", rep.residual, 1e-5))
    return out


# 2 -------------------------------------------------------------------------

def criterion_2(m: HopfModel | None = None, grid: GridSpec = GridSpec()):
    """The constant field is obstructed with the closed-form scalars."""
    m = m or _model()
    obs = obstruction(field_from_spec("const1", m), m, grid)
    return [
        _check("c - 2 ln 2", abs(obs.c - 2 * LN2), 1e-6, f"c={obs.c.real:.9f}", strict=False),
        _check("I+ - ln 2", abs(obs.I_plus - LN2), 1e-8, strict=False),
        _check("I- - ln 2", abs(obs.I_minus - LN2), 1e-8, strict=False),
    ]


# 3 -------------------------------------------------------------------------

def criterion_3(m: HopfModel | None = None, grid: GridSpec = GridSpec()):
    """t/r has trivial transversal class but a nonzero descent scalar."""
    m = m or _model()
    g = field_from_spec("t_over_r", m)
    obs = obstruction(g, m, grid)
    d_err = abs(obs.d - (-LN2)) if obs.d is not None else np.inf
    rep = solve_cohomological_equation(g, m, grid, obs=obs)
    return [
        _check("|c|", abs(obs.c), 1e-6),
        _check("osc(h)", obs.oscillation, 1e-6),
        _check("d + ln 2", d_err, 1e-6, f"d={obs.d}", strict=False),
        CheckResult("solve reports unsolvable", not rep.solvable, detail=f"solvable={rep.solvable}"),
    ]


# 4 -------------------------------------------------------------------------

def criterion_4(m: HopfModel | None = None, grid: GridSpec = GridSpec()):
    """``c = I+ + I-`` everywhere and ``d = I- = -I+`` where d is defined."""
    m = m or _model()
    out = []
    for name in builtin_names(m.n):
        obs = obstruction(field_from_spec(name, m), m, grid)
        out.append(_check(f"{name} c-(I++I-)", abs(obs.c - obs.I_plus - obs.I_minus), 1e-8, strict=False))
        if obs.d is not None:
            out.append(_check(f"{name} d-I-", abs(obs.d - obs.I_minus), 1e-8, strict=False))
            out.append(_check(f"{name} d+I+", abs(obs.d + obs.I_plus), 1e-8, strict=False))
    return out


# 5 -------------------------------------------------------------------------

def _e_atlas(n: int):
    """Smooth functions on E vanishing at the origin, with names."""
    return {
        "z1": lambda z: z[..., 0],
        "z2-3z1": lambda z: z[..., 1] - 3 * z[..., 0],
        "|z|^2": lambda z: np.sum(z * z, axis=-1),
        "z1*z2": lambda z: z[..., 0] * z[..., 1],
        "z1^3": lambda z: z[..., 0] ** 3,
        "sin(z1)": lambda z: np.sin(z[..., 0]),
        "exp(z2)-1": lambda z: np.expm1(z[..., 1]),
        "cos(|z|)-1+z1": lambda z: np.cos(np.linalg.norm(z, axis=-1)) - 1 + z[..., 0],
    }


def criterion_5(m: HopfModel | None = None):
    """Geometric-series solver: residual, closed forms and rejection."""
    m = m or _model()
    R = 2.0
    pts = ball_samples(m.n, R)
    out = []
    for name, func in _e_atlas(m.n).items():
        g = FieldE(func)
        f = solve_contraction(g, R, m.series_tol, m)
        res = np.max(np.abs(f(pts) - f(m.lam * pts) - g(pts)))
        out.append(_check(f"{name} residual", res, 2 * m.series_tol))
    lin = np.arange(1, m.n + 1, dtype=float)
    g_lin = FieldE(lambda z: z @ lin)
    f_lin = solve_contraction(g_lin, R, m.series_tol, m)
    err = np.max(np.abs(f_lin(pts) - (pts @ lin) / (1 - m.lam)))
    out.append(_check("linear closed form", err, 1e-10, strict=False))
    g_sq = FieldE(lambda z: 2.5 * np.sum(z * z, axis=-1))
    f_sq = solve_contraction(g_sq, R, m.series_tol, m)
    err = np.max(np.abs(f_sq(pts) - 2.5 * np.sum(pts * pts, axis=-1) / (1 - m.lam ** 2)))
    out.append(_check("quadratic closed form", err, 1e-10, strict=False))
    try:
        solve_contraction(FieldE(lambda z: np.ones(z.shape[:-1])), R, m.series_tol, m)
        rejected = False
    except NecessaryConditionViolated:
        rejected = True
    out.append(CheckResult("g = 1 rejected", rejected))
    return out


# 6 -------------------------------------------------------------------------

def criterion_6(m: HopfModel | None = None, grid: GridSpec = GridSpec(), seed: int = 3):
    """Solutions are unique up to constants; ``g = 0`` gives the zero field."""
    m = m or _model()
    zero = FieldM.constant(0.0, m.lam)
    rep0 = solve_cohomological_equation(zero, m, grid)
    W, TH, _ = m_grid(m.n, grid)
    out = []
    if rep0.solution is None:
        out.append(CheckResult("g = 0 solvable", False))
    else:
        out.append(_check("g = 0 sup|f|", np.max(np.abs(rep0.solution.at(W, TH))), 1e-6))
    _, g = random_coboundary(m, seed)
    m2 = HopfModel(m.n, m.lam, quad_tol=m.quad_tol / 10, series_tol=m.series_tol / 100, solve_tol=m.solve_tol)
    grid2 = GridSpec(grid.sphere_pts + 4, grid.theta_pts + 4, grid.radial_layers)
    r1 = solve_cohomological_equation(g, m, grid)
    r2 = solve_cohomological_equation(g, m2, grid2)
    if r1.solution is None or r2.solution is None:
        out.append(CheckResult("random coboundary solvable", False))
    else:
        out.append(_check("two solutions differ by a constant", _sup_mod_const(r1.solution, r2.solution, m, grid), 1e-6))
    return out


# 7 -------------------------------------------------------------------------

def _law_checks(rows, label, ref_p=8, slack=1.2):
    out = []
    by_kr: dict = {}
    for k, r, p, rho, prho in rows:
        by_kr.setdefault((k, r), {})[p] = prho
    for (k, r), col in sorted(by_kr.items()):
        ref = col[ref_p]
        peak = max(col.values())
        ratio = peak / ref if ref > 0 else (1.0 if peak == 0 else np.inf)
        out.append(_check(f"{label} k={k} r={r} max_p p*rho / (p*rho at p={ref_p})", ratio, slack, strict=False))
    return out


def criterion_7(m: HopfModel | None = None, grid: GridSpec = GridSpec()):
    """C/p law for sqrt, witness growth, polynomial negative control."""
    m = m or _model()
    prof = AppendixProfile("sqrt", p_max=64, k_list=(1, 2, 3), r_list=(0, 1, 2))
    out = _law_checks(convergence_table(prof, m, grid), "sqrt")

    f, _ = appendix_pair(prof, 1, m)
    wit = nonsmoothness_witness(f, m, layers=8, grid=grid)
    growth = min(wit[j + 1][2] / wit[j][2] for j in range(6))
    out.append(_check("sqrt witness min growth over 6 layers", -growth, -1.5, f"min ratio {growth:.4f}", strict=False))

    poly = AppendixProfile("t", p_max=64, k_list=(1, 2, 3), r_list=(0, 1, 2))
    out += _law_checks(convergence_table(poly, m, grid), "poly")
    fpoly, _ = appendix_pair(poly, 1, m)
    wp = [row[2] for row in nonsmoothness_witness(fpoly, m, layers=8, grid=grid)]
    out.append(_check("poly witness max/first", max(wp) / wp[0], 1.0 + 1e-9, strict=False))
    return out


# 8 -------------------------------------------------------------------------

def _dirac(n: int, seed: int) -> DistributionV:
    rng = np.random.default_rng(seed)
    u = rng.normal(size=n)
    u /= np.linalg.norm(u)
    th = float(rng.random())
    return DistributionV(None, [(TransversalPoint(u[None], np.array([th])), float(rng.uniform(0.5, 2.0)))])


def invariant_family(m: HopfModel, grid: GridSpec = GridSpec(), seed: int = 0):
    """Uniform lift, 5 density lifts, 5 Dirac lifts and the two orbit averages."""
    one = FieldV(lambda u, th: np.ones(np.shape(th)))
    fam = [lift_distribution(DistributionV(one), m, grid, "uniform")]
    for j in range(5):
        fam.append(lift_distribution(DistributionV(random_density(m.n, seed + 10 + j)), m, grid, f"density{j}"))
    for j in range(5):
        fam.append(lift_distribution(_dirac(m.n, seed + 20 + j), m, grid, f"dirac{j}"))
    fam += [orbit_distribution(+1, m), orbit_distribution(-1, m)]
    return fam


def criterion_8(m: HopfModel | None = None, grid: GridSpec = GridSpec(), n_fields: int = 20):
    """Invariant distributions annihilate divergences and detect obstructions."""
    m = m or _model()
    fam = invariant_family(m, grid)
    worst = {T.name: 0.0 for T in fam}
    for seed in range(101, 101 + n_fields):
        _, g = random_coboundary(m, seed)
        obs = obstruction(g, m, grid)
        for T in fam:
            worst[T.name] = max(worst[T.name], abs(T.pair_class(obs)))
    best = {T.name: 0.0 for T in fam}
    for name in builtin_names(m.n):
        obs = obstruction(field_from_spec(name, m), m, grid)
        if obs.vanishes:
            continue
        for T in fam:
            best[T.name] = max(best[T.name], abs(T.pair_class(obs)))
    out = []
    for T in fam:
        out.append(_check(f"{T.name} max|<T, Xf>|", worst[T.name], 1e-6))
        out.append(_check(f"{T.name} max pairing with obstructed built-ins", -best[T.name], -1e-3, strict=True))
    return out


# 9 -------------------------------------------------------------------------

def criterion_9(m: HopfModel | None = None, count: int = 1000, flow_count: int = 50, seed: int = 0):
    """Invariance of the metric and the projection, flow semigroup, period."""
    m = m or _model()
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(count, m.n))
    t = rng.normal(size=count)
    p = CoverPoint(z, t)
    gp = gamma(p, m)
    u = rng.normal(size=(count, m.n + 1))
    v = rng.normal(size=(count, m.n + 1))
    g0 = metric(p, u, v, m)
    g1 = metric(gp, m.lam * u, m.lam * v, m)
    out = [_check("metric invariance (relative)", np.max(np.abs(g1 - g0) / (1 + np.abs(g0))), 1e-12, strict=False)]
    q0, q1 = project(p, m), project(gp, m)
    dth = np.abs(q0.theta - q1.theta)
    dth = np.minimum(dth, 1 - dth)
    dw = np.max(np.abs(q0.w - q1.w))
    out.append(_check("project invariance", max(dw, float(np.max(dth))), 1e-12, strict=False))

    pf = CoverPoint(z[:flow_count], t[:flow_count])
    s1, s2 = 0.3, 0.45
    two = flow(flow(pf, s1, m, rtol=1e-12), s2, m, rtol=1e-12)
    one = flow(pf, s1 + s2, m, rtol=1e-12)
    err = np.max(np.abs(two.t - one.t) / (1 + np.abs(one.t)))
    out.append(_check("flow semigroup", err, 1e-8, strict=False))

    for sign in (+1, -1):
        start = CoverPoint(np.zeros((1, m.n)), np.array([float(sign)]))
        target = sign / m.lam if sign > 0 else sign * m.lam

        def gap(s):
            return float(flow(start, s, m).t[0]) - target

        s_star = brentq(gap, 1e-3, 10 * m.period, xtol=1e-14, rtol=1e-14)
        out.append(_check(f"period on F{'+' if sign > 0 else '-'}", abs(s_star - abs(m.log_lam)), 1e-8, strict=False))
    return out


CRITERIA: dict[int, tuple[str, Callable]] = {
    1: ("exactness on random coboundaries", criterion_1),
    2: ("obstructed scalars of const1", criterion_2),
    3: ("descent scalar of t/r", criterion_3),
    4: ("scalar identities over the atlas", criterion_4),
    5: ("contraction solver", criterion_5),
    6: ("uniqueness up to constants", criterion_6),
    7: ("seminorm law and nonsmoothness witness", criterion_7),
    8: ("invariant distributions", criterion_8),
    9: ("geometry", criterion_9),
}


def run_criterion(number: int, verbose: bool = False, stream=None):
    """Run one criterion and print its summary line; returns ``(passed, checks)``."""
    stream = stream or sys.stdout
    title, func = CRITERIA[number]
    t0 = time.perf_counter()
    checks = func()
    passed = all(c.passed for c in checks)
    elapsed = time.perf_counter() - t0
    n_fail = sum(not c.passed for c in checks)
    tag = "PASS" if passed else "FAIL"
    print(f"criterion {number} [{tag}] {title} ({len(checks) - n_fail}/{len(checks)} checks, {elapsed:.1f}s)", file=stream)
    for c in checks:
        if verbose or not c.passed:
            print(c.line(), file=stream)
    return passed, checks


def run_all(verbose: bool = False, stream=None) -> bool:
    ok = True
    for number in CRITERIA:
        passed, _ = run_criterion(number, verbose, stream)
        ok &= passed
    return ok
