import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bivekua.bicomplex import Bicomplex
from bivekua.calculus import GridFunction
from bivekua.domain import Domain, build_grid
from bivekua.errors import GridMismatch, NotProper, NotScalar, NotStarShaped
from bivekua.main_vekua import (CATALOG, Conductivity, anti_conjugate, b_from_f, catalog,
                                conductivity_residuals, conjugation_mask, dirichlet_solve,
                                first_order_defect, gradient_identity_defect, hilbert_transform,
                                interpolate, metaharmonic_conjugate, pair, schrodinger_residuals)


def scalar(g, vals):
    return GridFunction.scalar(g, np.asarray(vals, dtype=complex))


@pytest.fixture(scope="module")
def exp64(disk64):
    return catalog("exp_x", disk64)


@pytest.fixture(scope="module")
def one64(disk64):
    return catalog("one", disk64)


def test_catalog(disk32):
    for name in CATALOG:
        c = catalog(name, disk32)
        assert c.name == name and c.inv_bound > 0
    c = catalog("exp_x", disk32)
    assert np.allclose(c.values, np.exp(disk32.nodes.real))
    assert np.isclose(c.inv_bound, np.exp(-disk32.nodes.real.min()))
    assert catalog("one", disk32).f.values.allclose(1.0)
    assert b_from_f(catalog("one", disk32)).is_zero
    with pytest.raises(KeyError):
        catalog("nope", disk32)


def test_not_proper(disk32):
    with pytest.raises(NotProper):
        Conductivity.from_values(disk32, disk32.nodes.real - disk32.nodes.real[0])
    with pytest.raises(NotProper):
        Conductivity.from_callable(disk32, lambda z: np.full(z.shape, np.nan))


def test_interpolation_reproduces_linear(disk32):
    vals = 2 * disk32.nodes.real - 3j * disk32.nodes.imag + 1
    rng = np.random.default_rng(0)
    pts = 0.9 * (rng.uniform(-0.7, 0.7, 50) + 1j * rng.uniform(-0.7, 0.7, 50))
    out, ok = interpolate(disk32, vals, pts)
    assert ok.all()
    assert np.allclose(out, 2 * pts.real - 3j * pts.imag + 1)
    _, ok = interpolate(disk32, vals, np.array([0.999 + 0j]))
    assert not ok[0]


def test_linear_conjugate_exact(disk64, one64):
    x, y = disk64.nodes.real, disk64.nodes.imag
    v = metaharmonic_conjugate(one64, scalar(disk64, x))
    assert np.max(np.abs(v.sc - y)) <= 1e-12
    u = anti_conjugate(one64, scalar(disk64, y))
    assert np.max(np.abs(u.sc - x)) <= 1e-12


def test_quadratic_conjugate(disk64, one64):
    x, y = disk64.nodes.real, disk64.nodes.imag
    v = metaharmonic_conjugate(one64, scalar(disk64, x ** 2 - y ** 2))
    m = conjugation_mask(disk64)
    assert np.max(np.abs(v.sc - 2 * x * y)[m]) <= 1e-2


def test_constant_shift_and_u_equal_f(disk64, exp64):
    u = scalar(disk64, np.cos(disk64.nodes.imag))
    v0 = metaharmonic_conjugate(exp64, u)
    v2 = metaharmonic_conjugate(exp64, u, 2.0)
    assert np.allclose(v2.sc - v0.sc, 2.0 / exp64.values)
    v = metaharmonic_conjugate(exp64, exp64.f, 1.5)
    assert np.allclose(v.sc, 1.5 / exp64.values, atol=1e-12)


def test_round_trip(disk64, exp64):
    u = dirichlet_solve(exp64, lambda z: np.cos(np.angle(z)))
    v = metaharmonic_conjugate(exp64, u)
    u2 = anti_conjugate(exp64, v)
    m = disk64.safe() & conjugation_mask(disk64)
    # u is recovered up to a multiple of f
    k = np.mean((u.sc - u2.sc)[m] / exp64.values[m])
    assert np.max(np.abs(u2.sc + k * exp64.values - u.sc)[m]) <= 1e-2 * np.max(np.abs(u.sc))


def test_dirichlet_oracles(disk64, one64, exp64):
    x = disk64.nodes.real
    u = dirichlet_solve(one64, lambda z: np.real(z))
    assert np.max(np.abs(u.sc - x)) <= 1e-10
    u = dirichlet_solve(exp64, lambda z: np.ones(np.shape(z)))
    assert np.max(np.abs(u.sc - exp64.values)) <= 1e-10
    u = dirichlet_solve(one64, np.ones(disk64.n_boundary))
    assert np.allclose(u.sc, 1.0)
    with pytest.raises(GridMismatch):
        dirichlet_solve(one64, np.ones(3))


def test_dirichlet_rectangle(disk32):
    g = build_grid(Domain.rectangle(-1, 1, -0.5, 0.5), 40)
    c = catalog("one", g)
    u = dirichlet_solve(c, lambda z: np.real(z) ** 2 - np.imag(z) ** 2)
    exact = g.nodes.real ** 2 - g.nodes.imag ** 2
    assert np.max(np.abs(u.sc - exact)) <= 1e-10


def test_hilbert(disk64, one64, exp64):
    th = disk64.domain.boundary_parameter(disk64.boundary_points)
    H = hilbert_transform(one64, np.cos(th))
    assert np.max(np.abs(H - np.sin(th))) <= 1e-4
    H = hilbert_transform(one64, np.full(th.shape, 3.0))
    assert np.max(np.abs(H)) <= 1e-10
    # data for u/f equal to 1 gives u = f, whose conjugate vanishes
    H = hilbert_transform(exp64, np.ones(th.shape))
    assert np.max(np.abs(H)) <= 1e-10


def test_conjugate_pair_invariants(disk64, exp64):
    m = disk64.safe() & conjugation_mask(disk64)
    for phi in (lambda z: np.cos(np.angle(z)), lambda z: np.sin(2 * np.angle(z))):
        u = dirichlet_solve(exp64, phi)
        W = pair(u, metaharmonic_conjugate(exp64, u))
        assert first_order_defect(exp64, W, m) <= 1e-2
        assert max(conductivity_residuals(exp64, W, m)) <= 5e-2
        assert max(schrodinger_residuals(exp64, W, m)) <= 5e-2
        assert gradient_identity_defect(exp64, u) <= 1e-2


@settings(max_examples=10, deadline=None)
@given(st.floats(0.2, 1), st.floats(-1, 1))
def test_gradient_identity_quadratic_f(disk32, a, b):
    c = catalog("quadratic", disk32)
    u = dirichlet_solve(c, lambda z: 1 + a * np.real(z) + b * np.imag(z) ** 2)
    assert gradient_identity_defect(c, u) <= 5e-2


def test_errors(disk32, exp64):
    g = build_grid(Domain.rectangle(1, 2, 1, 2), 16)
    c = catalog("one", g)
    with pytest.raises(NotStarShaped):
        metaharmonic_conjugate(c, scalar(g, g.nodes.real))
    c = catalog("one", disk32)
    W = GridFunction(disk32, Bicomplex(np.ones(disk32.size), np.ones(disk32.size)))
    with pytest.raises(NotScalar):
        metaharmonic_conjugate(c, W)
    with pytest.raises(GridMismatch):
        metaharmonic_conjugate(exp64, scalar(disk32, disk32.nodes.real))
