import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfreeb.contraction import (
    NecessaryConditionViolated,
    SeriesSolution,
    ball_samples,
    gamma_class,
    lipschitz_bound,
    log_cocycle,
    solve_contraction,
)
from hopfreeb.fields import FieldE
from hopfreeb.geometry import HopfModel


def test_linear_closed_form(m):
    g = FieldE(lambda z: z[..., 0])
    f = solve_contraction(g, 1.0, 1e-12, m)
    z = ball_samples(2, 1.0, 200)
    np.testing.assert_allclose(f(z), 2 * z[:, 0], atol=1e-11)


def test_quadratic_closed_form(m):
    g = FieldE(lambda z: np.sum(z * z, axis=-1))
    f = solve_contraction(g, 1.0, 1e-12, m)
    z = ball_samples(2, 1.0, 200)
    np.testing.assert_allclose(f(z), (4.0 / 3.0) * np.sum(z * z, axis=-1), atol=1e-11)


def test_constant_rejected(m):
    with pytest.raises(NecessaryConditionViolated):
        solve_contraction(FieldE(lambda z: np.ones(z.shape[:-1])), 1.0, 1e-10, m)


def test_tail_bound_and_truncation(m):
    g = FieldE(lambda z: np.sin(z[..., 0] + 2 * z[..., 1]))
    f = solve_contraction(g, 2.0, 1e-9, m)
    assert isinstance(f, SeriesSolution)
    assert f.tail_bound <= 1e-9
    # truncation grows as the tolerance tightens
    assert solve_contraction(g, 2.0, 1e-12, m).K > f.K


@pytest.mark.parametrize("lam", [0.5, 1.0 / 3.0, 0.9])
def test_residual_on_ball(lam):
    m = HopfModel(lam=lam)
    g = FieldE(lambda z: np.expm1(z[..., 1]) + z[..., 0] ** 3)
    f = solve_contraction(g, 2.0, 1e-10, m)
    z = ball_samples(2, 2.0)
    res = np.max(np.abs(f(z) - f(lam * z) - g(z)))
    assert res < 2e-10


def test_gamma_class_examples():
    assert gamma_class(FieldE(lambda z: np.ones(z.shape[:-1])), 2) == 1
    assert gamma_class(FieldE(lambda z: z[..., 0]), 2) == 0
    assert gamma_class(FieldE(lambda z: 3 + z[..., 0]), 2) == 3


def test_log_cocycle(m, rng):
    ell = log_cocycle(m)
    assert ell(np.array([[1.0, 0.0]]))[0] == pytest.approx(0.0)
    assert ell(np.array([[0.5, 0.0]]))[0] == pytest.approx(-1.0)
    z = rng.normal(size=(100, 2))
    np.testing.assert_allclose(ell(z) - ell(m.lam * z), 1.0, atol=1e-13)


def test_lipschitz_bound_linear(m):
    L = lipschitz_bound(FieldE(lambda z: 3 * z[..., 0] - 4 * z[..., 1]), 2, 1.0)
    assert L == pytest.approx(5.0, rel=1e-6)


def test_ball_samples_inside_ball():
    z = ball_samples(3, 2.0)
    assert z.shape == (1000, 3)
    assert np.all(np.linalg.norm(z, axis=1) <= 2.0 + 1e-12)
    np.testing.assert_array_equal(z, ball_samples(3, 2.0))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-3, 3, allow_nan=False), min_size=2, max_size=2), st.floats(0.1, 0.9))
def test_linear_series_property(coef, lam):
    m = HopfModel(lam=lam)
    c = np.array(coef)
    f = solve_contraction(FieldE(lambda z: z @ c), 1.0, 1e-11, m)
    z = ball_samples(2, 1.0, 50)
    np.testing.assert_allclose(f(z), (z @ c) / (1 - lam), atol=1e-10)
