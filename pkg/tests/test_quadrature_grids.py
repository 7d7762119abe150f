import math

import numpy as np
import pytest

from hopfreeb.grids import GridSpec, annulus_grid, m_grid, sphere_quadrature, sphere_sup_grid, v_grid
from hopfreeb.quadrature import QuadratureError, gauss_kronrod_nodes, quad_batch, quad_segment


def test_quad_segment_examples():
    assert quad_segment(lambda s: np.ones_like(s), 0.0, 1.0) == pytest.approx(1.0, abs=1e-14)
    assert quad_segment(lambda s: s, -1.0, 1.0) == pytest.approx(0.0, abs=1e-14)
    val = quad_segment(lambda s: 1.0 / np.sqrt(0.01 + s * s), -1.0, 1.0, tol=1e-10)
    assert val == pytest.approx(2 * math.asinh(10.0), abs=1e-10)


@pytest.mark.parametrize("degree", [0, 5, 13, 22])
def test_kronrod_rule_polynomial_exactness(degree):
    x, wk, wg = gauss_kronrod_nodes()
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert np.dot(wk, x ** degree) == pytest.approx(exact, abs=1e-14)
    if degree <= 13:
        assert np.dot(wg, x ** degree) == pytest.approx(exact, abs=1e-14)


def test_quad_batch_many_owners():
    a = np.zeros(4)
    b = np.array([1.0, 2.0, 3.0, math.pi])
    vals, errs = quad_batch(lambda s, k: np.cos(s), a, b, 1e-12)
    np.testing.assert_allclose(vals, np.sin(b), atol=1e-12)
    assert np.all(errs <= 1e-12)


def test_quad_batch_complex_integrand():
    vals, _ = quad_batch(lambda s, k: np.exp(1j * s), [0.0], [2 * math.pi], 1e-12)
    assert abs(vals[0]) < 1e-12


def test_quad_batch_reports_failure():
    with pytest.raises(QuadratureError):
        quad_batch(lambda s, k: 1.0 / np.abs(s - 0.3), [0.0], [1.0], 1e-12, max_passes=5)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(1, 16, 8)


@pytest.mark.parametrize("dim", [2, 3])
def test_sphere_quadrature_moments(dim):
    pts, w = sphere_quadrature(dim, 16)
    assert w.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0)
    # <x_i^2> = 1/dim and <x_i^4> = 3/(dim (dim + 2))
    np.testing.assert_allclose(w @ pts ** 2, 1.0 / dim, atol=1e-13)
    np.testing.assert_allclose(w @ pts ** 4, 3.0 / (dim * (dim + 2)), atol=1e-13)


def test_sup_grid_includes_axes():
    d = sphere_sup_grid(3, 16)
    for axis in np.eye(3):
        assert np.min(np.linalg.norm(d - axis, axis=1)) < 1e-12


def test_v_and_m_grids():
    u, th, w = v_grid(2, GridSpec(8, 8, 8))
    assert u.shape == (64, 2) and th.shape == (64,)
    assert w.sum() == pytest.approx(1.0)
    W, TH, WT = m_grid(2, GridSpec(8, 8, 8))
    np.testing.assert_allclose(np.linalg.norm(W, axis=1), 1.0)
    assert WT.sum() == pytest.approx(1.0)
    assert np.all((TH >= 0) & (TH < 1))


def test_annulus_bounds():
    pts = annulus_grid(2, 0.5, 2, GridSpec())
    r = np.linalg.norm(pts, axis=1)
    assert r.min() == pytest.approx(0.25)
    assert r.max() == pytest.approx(4.0)
