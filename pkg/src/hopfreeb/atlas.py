"""Built-in fields on M: polynomials in w times Fourier modes in theta.

A :class:`TrigPoly` is a finite sum ``coeff * w^alpha * mode(theta)`` with
``mode`` one of ``cos(2 pi m theta)`` / ``sin(2 pi m theta)``.  The family is
closed under sums, products and under the flow's vector field (for the
default speed ``a = r``), which gives exact coboundaries for testing.

Named fields understood by :func:`field_from_spec`::

    const1, t_over_r, w1 .. w{n+1}, cos_theta, sin_theta, cos2_theta, ...
    random:<seed>            seeded random combination
    coboundary:<spec>        X applied to another spec
    <expression>             e.g. "0.5*w1*cos_theta + const1 - t_over_r"
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field

import numpy as np

from .fields import FieldM, apply_X
from .geometry import HopfModel, project_arrays

__all__ = ["TrigPoly", "builtin_names", "named_field", "random_trigpoly", "field_from_spec", "trigpoly_from_spec", "FieldSpecError"]

TWO_PI = 2.0 * np.pi


class FieldSpecError(ValueError):
    """Unrecognised field specification."""


def _mode_product(m1, k1, m2, k2):
    """Product of two Fourier modes as a list of ``(factor, m, kind)``."""
    # cos a cos b = (cos(a-b) + cos(a+b))/2, etc.
    if k1 == "c" and k2 == "c":
        return [(0.5, abs(m1 - m2), "c"), (0.5, m1 + m2, "c")]
    if k1 == "s" and k2 == "s":
        return [(0.5, abs(m1 - m2), "c"), (-0.5, m1 + m2, "c")]
    if k1 == "c":
        m1, m2 = m2, m1  # now the sine has index m1
    # sin a cos b = (sin(a+b) + sin(a-b))/2
    diff = m1 - m2
    out = [(0.5, m1 + m2, "s")]
    if diff > 0:
        out.append((0.5, diff, "s"))
    elif diff < 0:
        out.append((-0.5, -diff, "s"))
    return out


@dataclass
class TrigPoly:
    """Finite sum of ``coeff * w^alpha * mode(theta)`` on S^n x S^1."""

    n: int
    terms: dict = field(default_factory=dict)

    @staticmethod
    def _key(alpha, m, kind):
        if m == 0:
            kind = "c"
        return (tuple(int(a) for a in alpha), int(m), kind)

    def add_term(self, coeff, alpha, m=0, kind="c"):
        if kind == "s" and m == 0:
            return self
        key = self._key(alpha, m, kind)
        self.terms[key] = self.terms.get(key, 0.0) + coeff
        if self.terms[key] == 0:
            del self.terms[key]
        return self

    @classmethod
    def constant(cls, n: int, c=1.0) -> "TrigPoly":
        return cls(n).add_term(c, (0,) * (n + 1))

    @classmethod
    def coordinate(cls, n: int, i: int) -> "TrigPoly":
        alpha = [0] * (n + 1)
        alpha[i] = 1
        return cls(n).add_term(1.0, alpha)

    @classmethod
    def mode(cls, n: int, m: int, kind: str) -> "TrigPoly":
        return cls(n).add_term(1.0, (0,) * (n + 1), m, kind)

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(self.n, other)
        out = TrigPoly(self.n, dict(self.terms))
        for (alpha, m, kind), c in other.terms.items():
            out.add_term(c, alpha, m, kind)
        return out

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TrigPoly):
            return TrigPoly(self.n, {k: other * c for k, c in self.terms.items() if other * c != 0})
        out = TrigPoly(self.n)
        for (a1, m1, k1), c1 in self.terms.items():
            for (a2, m2, k2), c2 in other.terms.items():
                alpha = tuple(x + y for x, y in zip(a1, a2))
                for f, m, kind in _mode_product(m1, k1, m2, k2):
                    out.add_term(c1 * c2 * f, alpha, m, kind)
        return out

    __rmul__ = __mul__

    def __call__(self, w, theta):
        w = np.asarray(w, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        powers: dict = {}
        trig: dict = {}
        for (alpha, m, kind), c in sorted(self.terms.items()):
            mono = None
            for i, a in enumerate(alpha):
                if a:
                    key = (i, a)
                    if key not in powers:
                        powers[key] = w[..., i] ** a
                    mono = powers[key] if mono is None else mono * powers[key]
            if (m, kind) not in trig:
                arg = TWO_PI * m * theta
                trig[(m, kind)] = np.cos(arg) if kind == "c" else np.sin(arg)
            term = c * trig[(m, kind)]
            out += term if mono is None else term * mono
        return out

    def flow_derivative(self, lam: float) -> "TrigPoly":
        """Exact ``X f`` for the speed ``a = r``.

        On the chart, ``X = sum_i (delta_{i,n} - w_i w_n) d/dw_i
        + (w_n / ln lam) d/dtheta`` with ``w_n`` the t-component.
        """
        n = self.n
        last = n
        out = TrigPoly(n)
        inv_log = 1.0 / np.log(lam)
        for (alpha, m, kind), c in self.terms.items():
            for i, a in enumerate(alpha):
                if not a:
                    continue
                lower = list(alpha)
                lower[i] -= 1
                if i == last:
                    out.add_term(c * a, lower, m, kind)
                # - w_i w_last d/dw_i (w^alpha) = - a w^alpha w_last
                raised = list(alpha)
                raised[last] += 1
                out.add_term(-c * a, raised, m, kind)
            if m:
                raised = list(alpha)
                raised[last] += 1
                if kind == "c":
                    out.add_term(-c * TWO_PI * m * inv_log, raised, m, "s")
                else:
                    out.add_term(c * TWO_PI * m * inv_log, raised, m, "c")
        return out

    def to_field(self, m: HopfModel, name: str = "") -> FieldM:
        """Field on M with analytic t-derivative of its lift."""
        lam = m.lam
        deriv = self.flow_derivative(lam)

        def dt(z, t):
            # the chart expression equals r * d/dt of the lift
            w, theta = project_arrays(z, t, lam)
            r = np.sqrt(np.sum(np.asarray(z) ** 2, axis=-1) + np.asarray(t) ** 2)
            return deriv(w, theta) / r

        return FieldM.from_chart(self, lam, dt=dt, name=name)

    def __repr__(self) -> str:
        return f"TrigPoly(n={self.n}, terms={len(self.terms)})"


def random_trigpoly(n: int, seed: int, n_terms: int = 6, max_degree: int = 2, max_mode: int = 2) -> TrigPoly:
    """Seeded random combination of low-degree monomials and modes."""
    rng = np.random.default_rng(seed)
    p = TrigPoly(n)
    for _ in range(n_terms):
        deg = int(rng.integers(0, max_degree + 1))
        alpha = [0] * (n + 1)
        for _ in range(deg):
            alpha[int(rng.integers(0, n + 1))] += 1
        m = int(rng.integers(0, max_mode + 1))
        kind = "c" if rng.random() < 0.5 else "s"
        p.add_term(float(rng.normal()), alpha, m, kind)
    if not p.terms:
        p.add_term(1.0, [0] * (n + 1), 1, "c")
    return p


_MODE_RE = re.compile(r"^(cos|sin)(\d*)_theta$")
_COORD_RE = re.compile(r"^w(\d+)$")


def builtin_names(n: int) -> list[str]:
    names = ["const1", "t_over_r"] + [f"w{i}" for i in range(1, n + 2)]
    names += ["cos_theta", "sin_theta", "cos2_theta", "sin2_theta"]
    return names


def named_field(name: str, n: int) -> TrigPoly:
    """TrigPoly for a primitive name of the atlas."""
    if name == "const1":
        return TrigPoly.constant(n)
    if name == "t_over_r":
        return TrigPoly.coordinate(n, n)
    mo = _COORD_RE.match(name)
    if mo:
        i = int(mo.group(1))
        if not 1 <= i <= n + 1:
            raise FieldSpecError(f"coordinate {name} out of range for n={n}")
        return TrigPoly.coordinate(n, i - 1)
    mo = _MODE_RE.match(name)
    if mo:
        m = int(mo.group(2) or 1)
        return TrigPoly.mode(n, m, mo.group(1)[0])
    raise FieldSpecError(f"unknown field primitive {name!r}")


def _eval_expr(node, n):
    if isinstance(node, ast.Expression):
        return _eval_expr(node.body, n)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name):
        return named_field(node.id, n)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_expr(node.operand, n)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult)):
        lhs = _eval_expr(node.left, n)
        rhs = _eval_expr(node.right, n)
        if isinstance(node.op, ast.Add):
            return lhs + rhs
        if isinstance(node.op, ast.Sub):
            return lhs - rhs
        if isinstance(lhs, float) and isinstance(rhs, float):
            return lhs * rhs
        return rhs * lhs if isinstance(lhs, float) else lhs * rhs
    raise FieldSpecError(f"unsupported construct in field expression: {ast.dump(node)}")


def trigpoly_from_spec(spec: str, n: int, lam: float) -> TrigPoly:
    spec = spec.strip()
    if spec.startswith("coboundary:"):
        return trigpoly_from_spec(spec[len("coboundary:"):], n, lam).flow_derivative(lam)
    if spec.startswith("random:"):
        try:
            seed = int(spec[len("random:"):])
        except ValueError as exc:
            raise FieldSpecError(f"bad seed in {spec!r}") from exc
        return random_trigpoly(n, seed)
    try:
        tree = ast.parse(spec, mode="eval")
    except SyntaxError as exc:
        raise FieldSpecError(f"cannot parse field spec {spec!r}") from exc
    val = _eval_expr(tree, n)
    if isinstance(val, float):
        val = TrigPoly.constant(n, val)
    return val


def field_from_spec(spec: str, m: HopfModel) -> FieldM:
    """Field on M for a spec string; ``coboundary:`` goes through :func:`apply_X`."""
    spec = spec.strip()
    if spec.startswith("coboundary:"):
        inner = field_from_spec(spec[len("coboundary:"):], m)
        out = apply_X(inner, m)
        return FieldM(out.cover, out.lam, None, spec)
    return trigpoly_from_spec(spec, m.n, m.lam).to_field(m, name=spec)
