import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfreeb.atlas import field_from_spec, random_trigpoly
from hopfreeb.fields import (
    DerivativeOrderError,
    DomainError,
    FieldE,
    FieldEStar,
    FieldM,
    FieldV,
    apply_X,
    derivative,
    fd_weights,
    mean_V,
    multi_indices,
    seminorm,
)
from hopfreeb.geometry import HopfModel


def test_multi_indices_count():
    # number of s in N^n with |s| <= r is C(n + r, r)
    assert len(multi_indices(2, 2)) == 6
    assert len(multi_indices(3, 2)) == 10
    assert multi_indices(2, 1)[0] == (0, 0)


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_fd_weights_annihilate_low_powers(order):
    offsets, w = fd_weights(order, 4)
    for k in range(order):
        assert abs(np.dot(w, offsets ** k)) < 1e-10
    assert np.dot(w, offsets ** order) == pytest.approx(math.factorial(order), rel=1e-10)


def test_derivative_examples(m, rng):
    z = rng.normal(size=(20, 2))
    sq = FieldE(lambda z: z[..., 0] ** 2)
    np.testing.assert_allclose(derivative(sq, (2, 0), z, m), 2.0, atol=1e-6)
    norm2 = FieldE(lambda z: np.sum(z * z, axis=-1))
    np.testing.assert_allclose(derivative(norm2, (1, 1), z, m), 0.0, atol=1e-6)
    ex = FieldE(lambda z: np.exp(z[..., 0]))
    assert derivative(ex, (3, 0), np.zeros((1, 2)), m)[0] == pytest.approx(1.0, abs=1e-5)


def test_derivative_errors(m):
    f = FieldE(lambda z: z[..., 0])
    with pytest.raises(DerivativeOrderError):
        derivative(f, (3, 2), np.ones((1, 2)), m)
    with pytest.raises(ValueError):
        derivative(f, (1, 0, 0), np.ones((1, 2)), m)
    g = FieldEStar(lambda z: np.log(np.linalg.norm(z, axis=-1)))
    with pytest.raises(DomainError):
        derivative(g, (1, 0), np.array([[1e-5, 0.0]]), m)


def test_seminorm_examples(m):
    one = FieldE(lambda z: np.ones(z.shape[:-1]))
    for k in (1, 2, 3):
        assert seminorm(one, k, 0, m) == pytest.approx(1.0)
    z1 = FieldE(lambda z: z[..., 0])
    assert seminorm(z1, 1, 0, m) == pytest.approx(2.0, rel=1e-12)
    with pytest.raises(ValueError):
        seminorm(z1, 0, 0, m)


def test_seminorm_monotone(m):
    f = FieldE(lambda z: np.sin(z[..., 0]) * np.exp(0.3 * z[..., 1]))
    for k in (1, 2):
        for r in (0, 1):
            assert seminorm(f, k, r, m) <= seminorm(f, k + 1, r + 1, m) + 1e-12


def test_apply_X_examples(m, rng):
    w = rng.normal(size=(40, 3))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    th = rng.random(40)
    zero = apply_X(FieldM.constant(2.5, m.lam), m)
    np.testing.assert_allclose(zero.at(w, th), 0.0, atol=1e-14)
    t_over_r = FieldM(lambda z, t: t / np.sqrt(np.sum(z * z, axis=-1) + t * t), m.lam)
    val = apply_X(t_over_r, m).cover(np.array([[1.0, 0.0]]), np.array([0.0]))
    assert val[0] == pytest.approx(1.0, abs=1e-9)


def test_apply_X_fd_matches_analytic(m, rng):
    f = random_trigpoly(2, 5).to_field(m)
    no_dt = FieldM(f.cover, m.lam)
    w = rng.normal(size=(50, 3))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    th = rng.random(50)
    np.testing.assert_allclose(apply_X(no_dt, m).at(w, th), apply_X(f, m).at(w, th), atol=1e-8)


@settings(max_examples=10, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 50), st.integers(0, 50))
def test_apply_X_linear(alpha, beta, s1, s2):
    m = HopfModel()
    f = random_trigpoly(2, s1).to_field(m)
    g = random_trigpoly(2, s2).to_field(m)
    rng = np.random.default_rng(0)
    w = rng.normal(size=(20, 3))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    th = rng.random(20)
    lhs = apply_X(alpha * f + beta * g, m).at(w, th)
    rhs = alpha * apply_X(f, m).at(w, th) + beta * apply_X(g, m).at(w, th)
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


def test_mean_V_examples(grid):
    assert mean_V(FieldV(lambda u, th: np.full(th.shape, 3.0)), 2, grid) == pytest.approx(3.0)
    assert abs(mean_V(FieldV(lambda u, th: u[..., 0]), 2, grid)) < 1e-10
    assert abs(mean_V(FieldV(lambda u, th: np.cos(2 * np.pi * th)), 2, grid)) < 1e-10
    assert abs(mean_V(FieldV(lambda u, th: u[..., 2] ** 3), 3, grid)) < 1e-10


def test_field_m_constant_and_arithmetic(m):
    f = field_from_spec("w1", m)
    g = field_from_spec("cos_theta", m)
    h = f * g + 2.0
    w = np.array([[0.6, 0.8, 0.0]])
    th = np.array([0.25])
    assert h.at(w, th)[0] == pytest.approx(0.6 * np.cos(np.pi / 2) + 2.0)
    assert h.dt is not None
