"""Command line driver: ``hopf <command> --config <path> [--out <dir>]``.

Commands and the files they write (all CSV with a one-line header):

obstruct    obstruction.csv (field, c, d, I_plus, I_minus, oscillation, h_mean)
            obstruction_h.csv (u1..un, theta, h) on the V-grid
solve       the obstruct files, solve_summary.csv (field, solvable, residual)
            and, when solvable, solution.csv (w1..w{n+1}, theta, f) on the M-grid
appendix    convergence.csv (k, r, p, rho, p_times_rho), witness.csv (j, radius, sup_derivative)
invariants  pairings.csv (field, distribution, pairing)
selftest    prints one pass/fail line per acceptance criterion

Exit status: 0 success, 2 unsolvable (solve only), 1 error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .acceptance import invariant_family, run_all
from .atlas import FieldSpecError, builtin_names, field_from_spec
from .config import COMMANDS, ConfigError, RunConfig, load_config
from .frechet import (
    CONVERGENCE_HEADER,
    WITNESS_HEADER,
    AppendixProfile,
    appendix_pair,
    convergence_table,
    nonsmoothness_witness,
    write_csv,
)
from .grids import m_grid
from .pipeline import ObstructionClass, obstruction, solve_cohomological_equation

EXIT_OK, EXIT_ERROR, EXIT_UNSOLVABLE = 0, 1, 2


class StepError(RuntimeError):
    """A numerical step failed; the message names it."""


def _num(x):
    """Real values print as floats, genuinely complex ones as ``a+bj``."""
    x = complex(x)
    if x.imag == 0.0:
        return repr(x.real)
    return repr(x)


def _step(name, func, *args, **kw):
    try:
        return func(*args, **kw)
    except (FieldSpecError, ConfigError):
        raise
    except Exception as exc:  # noqa: BLE001 - reported with the step name
        raise StepError(f"{name} failed: {type(exc).__name__}: {exc}") from exc


def _write_obstruction(obs: ObstructionClass, cfg: RunConfig, out: Path) -> None:
    d = "undefined" if obs.d is None else _num(obs.d)
    write_csv(
        out / "obstruction.csv",
        ("field", "c", "d", "I_plus", "I_minus", "oscillation", "h_mean"),
        [(cfg.field, _num(obs.c), d, _num(obs.I_plus), _num(obs.I_minus), obs.oscillation, _num(obs.h_mean))],
    )
    u, th, h = obs.h_grid
    header = tuple(f"u{i + 1}" for i in range(cfg.n)) + ("theta", "h")
    rows = [tuple(ui) + (ti, _num(hi)) for ui, ti, hi in zip(u, th, h)]
    write_csv(out / "obstruction_h.csv", header, rows)


def cmd_obstruct(cfg: RunConfig, out: Path) -> int:
    m = cfg.model
    g = _step("field construction", field_from_spec, cfg.field, m)
    obs = _step("obstruction", obstruction, g, m, cfg.grid)
    _write_obstruction(obs, cfg, out)
    d = "undefined" if obs.d is None else f"{complex(obs.d).real:.9g}"
    print(f"{cfg.field}: c={complex(obs.c).real:.9g} osc={obs.oscillation:.3g} d={d}")
    return EXIT_OK


def cmd_solve(cfg: RunConfig, out: Path) -> int:
    m = cfg.model
    g = _step("field construction", field_from_spec, cfg.field, m)
    obs = _step("obstruction", obstruction, g, m, cfg.grid)
    _write_obstruction(obs, cfg, out)
    rep = _step("solve", solve_cohomological_equation, g, m, cfg.grid, obs=obs)
    residual = "" if rep.residual is None else rep.residual
    write_csv(out / "solve_summary.csv", ("field", "solvable", "residual"), [(cfg.field, str(rep.solvable), residual)])
    if not rep.solvable:
        d = "undefined" if obs.d is None else f"{complex(obs.d).real:.9g}"
        print(f"{cfg.field}: unsolvable (c={complex(obs.c).real:.6g}, osc={obs.oscillation:.3g}, d={d})")
        return EXIT_UNSOLVABLE
    W, TH, _ = m_grid(cfg.n, cfg.grid)
    vals = _step("solution sampling", rep.solution.at, W, TH)
    header = tuple(f"w{i + 1}" for i in range(cfg.n + 1)) + ("theta", "f")
    write_csv(out / "solution.csv", header, [tuple(wi) + (ti, _num(fi)) for wi, ti, fi in zip(W, TH, vals)])
    print(f"{cfg.field}: solved, residual={rep.residual:.3e}")
    return EXIT_OK


def cmd_appendix(cfg: RunConfig, out: Path) -> int:
    m = cfg.model
    prof = AppendixProfile(cfg.phi, p_max=cfg.p_max)
    rows = _step("convergence table", convergence_table, prof, m, cfg.grid)
    write_csv(out / "convergence.csv", CONVERGENCE_HEADER, rows)
    f, _ = appendix_pair(prof, 1, m)
    wit = _step("nonsmoothness witness", nonsmoothness_witness, f, m, grid=cfg.grid)
    write_csv(out / "witness.csv", WITNESS_HEADER, wit)
    print(f"phi={cfg.phi}: {len(rows)} seminorm rows, witness {wit[0][2]:.4g} -> {wit[-1][2]:.4g}")
    return EXIT_OK


def cmd_invariants(cfg: RunConfig, out: Path) -> int:
    m = cfg.model
    fam = invariant_family(m, cfg.grid, cfg.seed)
    battery = builtin_names(cfg.n)
    if cfg.field not in battery:
        battery.append(cfg.field)
    battery += [f"coboundary:random:{cfg.seed + j}" for j in range(1, 6)]
    rows = []
    for spec in battery:
        g = _step("field construction", field_from_spec, spec, m)
        obs = _step(f"obstruction of {spec}", obstruction, g, m, cfg.grid)
        for T in fam:
            rows.append((spec, T.name, _num(T.pair_class(obs))))
    write_csv(out / "pairings.csv", ("field", "distribution", "pairing"), rows)
    print(f"{len(battery)} fields x {len(fam)} distributions")
    return EXIT_OK


def cmd_selftest(cfg: RunConfig, out: Path) -> int:
    return EXIT_OK if run_all() else EXIT_ERROR


_COMMANDS = {
    "obstruct": cmd_obstruct,
    "solve": cmd_solve,
    "appendix": cmd_appendix,
    "invariants": cmd_invariants,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hopf", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="flat key = value file (defaults apply when omitted)")
    ap.add_argument("--out", default=".", help="output directory (created if missing)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.command) if args.config else RunConfig(command=args.command)
        cfg.model  # validates n and tolerances
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with np.errstate(all="ignore"):
            return _COMMANDS[args.command](cfg, out)
    except (ConfigError, FieldSpecError, StepError, ValueError, OSError) as exc:
        print(f"hopf {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
