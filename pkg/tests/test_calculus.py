import numpy as np
import pytest

from bivekua.bicomplex import Bicomplex, hat
from bivekua.calculus import (GridFunction, analytic_power, d, d_bar, inner_l2, integrate,
                              lp_norm, vekua_residual)
from bivekua.domain import Domain, build_grid
from bivekua.errors import GridMismatch


def interior_max(F, mask):
    return float(np.max(F.norm()[mask]))


def test_integrate(disk64):
    one = GridFunction.constant(disk64, 1.0)
    assert abs(integrate(one).sc - np.pi) <= 0.02 * np.pi
    assert integrate(GridFunction.constant(disk64, 0.0)).norm() == 0
    z = GridFunction.scalar(disk64, disk64.nodes)
    assert integrate(z).norm() <= 1e-12


def test_d_bar_and_d_of_zhat(disk64):
    Z = GridFunction.from_callable(disk64, hat)
    m = disk64.interior
    assert interior_max(d_bar(Z), m) <= 1e-12
    assert interior_max(d(Z) - 1.0, m) <= 1e-12
    Zc = GridFunction.from_callable(disk64, lambda z: Bicomplex(z.real, -z.imag))
    assert interior_max(d_bar(Zc) - 1.0, m) <= 1e-12


def test_analytic_powers(disk64):
    m = disk64.interior
    assert analytic_power(disk64, 0, 0).values.allclose(1.0)
    for n in (2, 3, 5):
        P = analytic_power(disk64, 0.1j, n)
        # centred differences are exact up to degree 2 and O(h²) beyond
        assert interior_max(d_bar(P), m) <= 20 * n ** 3 * disk64.h ** 2
    with pytest.raises(ValueError):
        analytic_power(disk64, 0, -1)


def test_idempotent_commutation(disk32):
    rng = np.random.default_rng(1)
    F = GridFunction(disk32, Bicomplex(rng.normal(size=disk32.size) + 1j,
                                       rng.normal(size=disk32.size) * 1j))
    D = d_bar(F)
    # (∂̄F)+ = ∂_z F+ and (∂̄F)- = ∂_{z*} F-, with the same stencils
    from bivekua.calculus import scalar_gradient
    px, py = scalar_gradient(disk32, F.plus)
    mx, my = scalar_gradient(disk32, F.minus)
    assert np.allclose(D.plus, 0.5 * (px - 1j * py), atol=1e-12)
    assert np.allclose(D.minus, 0.5 * (mx + 1j * my), atol=1e-12)
    # (∂W)† = ∂̄(W†)
    assert d(F).dagger().values.allclose(d_bar(F.dagger()).values, atol=1e-12)


def test_second_order_convergence():
    errs = []
    for n in (32, 64):
        g = build_grid(Domain.disk(), n)
        F = GridFunction.from_callable(g, lambda z: Bicomplex(1, 1) * (np.sin(z.real) * np.cosh(z.imag)))
        # ∂̄ of s(x, y)(1 + j) is ½(s_x + j s_y)(1 + j)
        ex = GridFunction.from_callable(
            g, lambda z: Bicomplex(1, 1) * Bicomplex(np.cos(z.real) * np.cosh(z.imag),
                                                     np.sin(z.real) * np.sinh(z.imag)) * 0.5)
        m = g.interior & (np.abs(g.nodes) <= 0.5)
        errs.append(interior_max(d_bar(F) - ex, m))
    assert errs[0] / errs[1] > 3.5


def test_norms(disk64):
    one = GridFunction.constant(disk64, 1.0)
    assert abs(lp_norm(one, 2) - np.sqrt(np.pi)) <= 0.02 * np.sqrt(np.pi)
    F = GridFunction.from_callable(disk64, lambda z: hat(z) ** 2 + 3j)
    assert abs(inner_l2(F, F) - lp_norm(F, 2) ** 2) <= 1e-12 * lp_norm(F, 2) ** 2
    assert inner_l2(one, one.times_j()) == 0
    assert lp_norm(F, np.inf) == F.sup()
    with pytest.raises(ValueError):
        lp_norm(F, 0.5)


def test_grid_mismatch(disk32, disk64):
    with pytest.raises(GridMismatch):
        GridFunction.constant(disk32, 1) + GridFunction.constant(disk64, 1)
    with pytest.raises(GridMismatch):
        inner_l2(GridFunction.constant(disk32, 1), GridFunction.constant(disk64, 1))


def test_vekua_residual_trivial_solutions(small64):
    g = small64
    f = GridFunction.scalar(g, np.exp(g.nodes.real) * (1 + 0.3 * g.nodes.imag ** 2))
    b = d_bar(f) / f
    a = GridFunction.constant(g, 0.0)
    m = g.interior
    assert interior_max(vekua_residual(f, a, b), m) <= 1e-12
    # j/f holds only up to O(h²) since differencing does not commute with 1/f
    assert interior_max(vekua_residual((1 / f).times_j(), a, b), m) <= 1e-3
    # except for exponentials, which the centred stencil maps to multiples of themselves
    e = GridFunction.scalar(g, np.exp(g.nodes.real))
    be = d_bar(e) / e
    assert interior_max(vekua_residual((1 / e).times_j(), a, be), m) <= 1e-12
    Z = GridFunction.from_callable(g, hat)
    assert interior_max(vekua_residual(Z, a, a), m) <= 1e-12
