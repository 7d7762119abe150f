"""Flat ``key = value`` run configuration."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .geometry import HopfModel
from .grids import GridSpec

__all__ = ["ConfigError", "RunConfig", "COMMANDS", "parse_config", "load_config"]

COMMANDS = ("obstruct", "solve", "appendix", "invariants", "selftest")
MIN_RESOLUTION = 8


class ConfigError(ValueError):
    """Malformed configuration; the message carries the line number."""


def _fraction(text: str) -> float:
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


_KEYS = {
    "n": int,
    "lambda": _fraction,
    "quad_tol": float,
    "series_tol": float,
    "solve_tol": float,
    "sphere_pts": int,
    "theta_pts": int,
    "radial_layers": int,
    "field": str,
    "phi": str,
    "p_max": int,
    "seed": int,
}


@dataclass(frozen=True)
class RunConfig:
    command: str = "obstruct"
    n: int = 2
    lam: float = 0.5
    quad_tol: float = 1e-11
    series_tol: float = 1e-10
    solve_tol: float = 1e-6
    sphere_pts: int = 16
    theta_pts: int = 16
    radial_layers: int = 8
    field: str = "const1"
    phi: str = "sqrt"
    p_max: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        if not 0.0 < self.lam < 1.0:
            raise ConfigError(f"lambda must lie in (0, 1), got {self.lam}")
        for key in ("sphere_pts", "theta_pts", "radial_layers"):
            if getattr(self, key) < MIN_RESOLUTION:
                raise ConfigError(f"{key} must be >= {MIN_RESOLUTION}, got {getattr(self, key)}")

    @property
    def model(self) -> HopfModel:
        return HopfModel(self.n, self.lam, self.quad_tol, 4, self.series_tol, self.solve_tol)

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.sphere_pts, self.theta_pts, self.radial_layers)


def parse_config(text: str, command: str) -> RunConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict = {}
    seen: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first set on line {seen[key]})")
        if not val:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        try:
            values["lam" if key == "lambda" else key] = _KEYS[key](val)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {val!r}") from exc
        seen[key] = lineno
    try:
        return RunConfig(command=command, **values)
    except ValueError as exc:
        msg = str(exc)
        for key, lineno in seen.items():
            if msg.startswith(key):
                msg = f"line {lineno}: {msg}"
                break
        raise ConfigError(msg) from exc


def load_config(path, command: str) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"), command)
