import numpy as np
import pytest

from hopfreeb.atlas import (
    FieldSpecError,
    TrigPoly,
    builtin_names,
    field_from_spec,
    random_trigpoly,
    trigpoly_from_spec,
)
from hopfreeb.fields import FieldM, apply_X


def _chart_points(rng, n=2, count=40):
    w = rng.normal(size=(count, n + 1))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    return w, rng.random(count)


def test_builtin_names(m):
    names = builtin_names(2)
    assert names[:2] == ["const1", "t_over_r"]
    assert {"w1", "w2", "w3", "cos_theta", "sin2_theta"} <= set(names)
    for name in names:
        field_from_spec(name, m)


def test_named_values(m, rng):
    w, th = _chart_points(rng)
    np.testing.assert_allclose(field_from_spec("w2", m).at(w, th), w[:, 1])
    np.testing.assert_allclose(field_from_spec("t_over_r", m).at(w, th), w[:, 2])
    np.testing.assert_allclose(field_from_spec("sin2_theta", m).at(w, th), np.sin(4 * np.pi * th), atol=1e-14)


def test_product_to_sum(m, rng):
    w, th = _chart_points(rng)
    p = trigpoly_from_spec("cos_theta * sin2_theta * w1", 2, m.lam)
    expected = np.cos(2 * np.pi * th) * np.sin(4 * np.pi * th) * w[:, 0]
    np.testing.assert_allclose(p(w, th), expected, atol=1e-13)


def test_expression_spec(m, rng):
    w, th = _chart_points(rng)
    f = field_from_spec("2*w1 - 0.5*cos_theta + 1", m)
    np.testing.assert_allclose(f.at(w, th), 2 * w[:, 0] - 0.5 * np.cos(2 * np.pi * th) + 1, atol=1e-14)


@pytest.mark.parametrize("spec", ["bogus", "w9", "w1 / w2", "random:x", "w1 +", "__import__('os')"])
def test_bad_specs(spec, m):
    with pytest.raises(FieldSpecError):
        field_from_spec(spec, m)


@pytest.mark.parametrize("seed", [0, 1, 7, 42])
def test_exact_flow_derivative_matches_fd(seed, m, rng):
    p = random_trigpoly(2, seed)
    w, th = _chart_points(rng)
    exact = p.flow_derivative(m.lam)(w, th)

    fd = apply_X(FieldM(p.to_field(m).cover, m.lam), m).at(w, th)
    # fourth-order stencil with step 1e-3 r: truncation ~ (2 pi * mode * 1e-3 / ln 2)^4
    np.testing.assert_allclose(exact, fd, rtol=1e-6, atol=1e-7)


def test_coboundary_spec_routes(m, rng):
    w, th = _chart_points(rng)
    a = field_from_spec("coboundary:cos_theta", m).at(w, th)
    b = trigpoly_from_spec("coboundary:cos_theta", 2, m.lam)(w, th)
    np.testing.assert_allclose(a, b, rtol=1e-6, atol=1e-7)


def test_random_is_seeded():
    a, b = random_trigpoly(3, 11), random_trigpoly(3, 11)
    assert a.terms == b.terms
    assert random_trigpoly(3, 12).terms != a.terms


def test_dt_is_lift_derivative(m):
    # d/dt of the lift of t/r is |z|^2 / r^3
    f = field_from_spec("t_over_r", m)
    z = np.array([[0.3, -0.4]])
    t = np.array([0.2])
    r = np.sqrt(0.25 + 0.04)
    assert f.dt(z, t)[0] == pytest.approx(0.25 / r ** 3, rel=1e-12)


def test_trigpoly_constant_and_scale():
    c = TrigPoly.constant(2, 3.0)
    w = np.array([[1.0, 0.0, 0.0]])
    assert c(w, np.array([0.3]))[0] == pytest.approx(3.0)
    assert (2.0 * c)(w, np.array([0.3]))[0] == pytest.approx(6.0)
