"""Main Vekua equation ∂̄W = (∂̄f/f) W̄ for a scalar conductivity f.

Sc W = u and Vec W = v of a solution satisfy

    div(f² ∇(u/f)) = 0,     div(f⁻² ∇(f v)) = 0,

and the conjugate v is recovered from u by integrating along rays from
the origin,

    I_f u(z) = ∫₀¹ f²(tz) (y U_x(tz) − x U_y(tz)) dt,   U = u/f,
    v = (I_f u + c) / f,

which has ∇(I_f u) = (−f² U_y, f² U_x).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .bicomplex import Bicomplex
from .calculus import (GridFunction, check_same_grid, d_bar, laplacian_matrix,
                       scalar_gradient)
from .errors import GridMismatch, NotProper, NotScalar, NotStarShaped, SolverDivergence
from .vekua import Coefficients

PROPER_RTOL = 1e-12
PANELS_PER_UNIT = 32


@dataclass
class Conductivity:
    """Non-vanishing complex scalar f sampled on a grid.

    ``func``, ``grad`` and ``laplacian`` are optional closed forms used for
    off-grid evaluation along rays and on the boundary.  Without them f is
    interpolated bilinearly and its derivatives are differenced.
    """

    f: GridFunction
    grad_f: tuple
    inv_bound: float
    func: object = None
    grad: object = None
    laplacian: object = None
    name: str = "custom"

    @classmethod
    def from_values(cls, grid, values, name="custom"):
        values = np.asarray(values, dtype=complex)
        fx, fy = scalar_gradient(grid, values)
        return cls._build(grid, values, fx, fy, None, None, None, name)

    @classmethod
    def from_callable(cls, grid, func, grad=None, laplacian=None, name="custom"):
        values = np.asarray(func(grid.nodes), dtype=complex) * np.ones(grid.size)
        if grad is not None:
            fx, fy = (np.asarray(g, dtype=complex) * np.ones(grid.size)
                      for g in grad(grid.nodes))
        else:
            fx, fy = scalar_gradient(grid, values)
        return cls._build(grid, values, fx, fy, func, grad, laplacian, name)

    @classmethod
    def _build(cls, grid, values, fx, fy, func, grad, laplacian, name):
        a = np.abs(values)
        if not np.all(np.isfinite(values)) or a.min() <= PROPER_RTOL * max(a.max(), 1.0):
            raise NotProper("conductivity vanishes on the grid")
        return cls(GridFunction.scalar(grid, values),
                   (GridFunction.scalar(grid, fx), GridFunction.scalar(grid, fy)),
                   float(1 / a.min()), func, grad, laplacian, name)

    @property
    def grid(self):
        return self.f.grid

    @property
    def values(self):
        return self.f.sc

    def at(self, z):
        """f at arbitrary points inside the domain."""
        z = np.asarray(z, dtype=complex)
        if self.func is not None:
            return np.asarray(self.func(z), dtype=complex) * np.ones(z.shape)
        return interpolate(self.grid, self.values, z)[0]

    def laplacian_values(self):
        if self.laplacian is not None:
            return np.asarray(self.laplacian(self.grid.nodes), dtype=complex) * np.ones(self.grid.size)
        return laplacian_matrix(self.grid) @ self.values


def catalog(name, grid):
    """Built-in conductivities: ``one``, ``exp_x`` and ``quadratic`` (1 + |z|²/2)."""
    one = lambda z: np.ones(np.shape(z), dtype=complex)
    zero = lambda z: np.zeros(np.shape(z), dtype=complex)
    if name in ("one", "1"):
        return Conductivity.from_callable(grid, one, lambda z: (zero(z), zero(z)),
                                          zero, name="one")
    if name in ("exp_x", "exp(x)"):
        e = lambda z: np.exp(np.real(z)) + 0j
        return Conductivity.from_callable(grid, e, lambda z: (e(z), zero(z)), e, name="exp_x")
    if name in ("quadratic", "1+r2/2"):
        return Conductivity.from_callable(
            grid, lambda z: 1 + np.abs(z) ** 2 / 2 + 0j,
            lambda z: (np.real(z) + 0j, np.imag(z) + 0j),
            lambda z: 2 * one(z), name="quadratic")
    raise KeyError(f"unknown conductivity {name!r}")


CATALOG = ("one", "exp_x", "quadratic")


def b_from_f(c):
    """a = 0, b = ∂̄f / f."""
    f = c.f
    return Coefficients(GridFunction.constant(f.grid, 0.0), d_bar(f) / f)


def _check_scalar(F):
    if not F.is_scalar():
        raise NotScalar("expected a scalar (Vec = 0) grid function")


# ---- interpolation along rays -------------------------------------------

def interpolate(grid, values, pts):
    """Bilinear interpolation of node values at arbitrary points.

    Missing lattice corners are dropped and the remaining weights
    renormalized.  Returns ``(values, reliable)`` where ``reliable`` is
    False wherever a corner was missing or the point lay outside the
    lattice of centres.
    """
    pts = np.asarray(pts, dtype=complex)
    n = grid.n
    lat = np.full((n, n), np.nan, dtype=complex)
    lat[grid.ix, grid.iy] = values
    fx = (pts.real - grid.origin.real) / grid.hx - 0.5
    fy = (pts.imag - grid.origin.imag) / grid.hy - 0.5
    i0 = np.clip(np.floor(fx).astype(int), 0, n - 2)
    j0 = np.clip(np.floor(fy).astype(int), 0, n - 2)
    tx, ty = fx - i0, fy - j0
    inside = (tx >= -1e-9) & (tx <= 1 + 1e-9) & (ty >= -1e-9) & (ty <= 1 + 1e-9)
    tx, ty = np.clip(tx, 0, 1), np.clip(ty, 0, 1)
    acc = np.zeros(pts.shape, dtype=complex)
    wsum = np.zeros(pts.shape)
    complete = np.ones(pts.shape, dtype=bool)
    for di, dj, w in ((0, 0, (1 - tx) * (1 - ty)), (1, 0, tx * (1 - ty)),
                      (0, 1, (1 - tx) * ty), (1, 1, tx * ty)):
        v = lat[i0 + di, j0 + dj]
        ok = ~np.isnan(v)
        complete &= ok | (w == 0)
        acc += np.where(ok, w * np.nan_to_num(v), 0)
        wsum += np.where(ok, w, 0)
    out = np.where(wsum > 0, acc / np.where(wsum > 0, wsum, 1), np.nan)
    bad = ~(wsum > 0)
    if np.any(bad):
        near = np.argmin(np.abs(grid.nodes[None, :] - pts[bad][:, None]), axis=1)
        out[bad] = values[near]
    return out, complete & inside


def _simpson(m):
    w = np.ones(m + 1)
    w[1:-1:2], w[2:-1:2] = 4, 2
    return w / (3 * m)


def _ray_integral(c, sigma, G, targets):
    """∫₀¹ σ(tz)(y G_x(tz) − x G_y(tz)) dt for each target z."""
    grid = c.grid
    if not grid.domain.star_shaped_at_origin:
        raise NotStarShaped("radial conjugation needs a domain star-shaped about 0")
    gx, gy = scalar_gradient(grid, G)
    rmax = float(np.max(np.abs(targets), initial=0.0))
    m = max(2, 2 * int(np.ceil(PANELS_PER_UNIT * rmax / 2)))
    t = np.linspace(0.0, 1.0, m + 1)
    w = _simpson(m)
    pts = t[None, :] * targets[:, None]
    Gx, okx = interpolate(grid, gx, pts)
    Gy, oky = interpolate(grid, gy, pts)
    s = sigma(pts)
    integrand = s * (targets.imag[:, None] * Gx - targets.real[:, None] * Gy)
    return integrand @ w, np.all(okx & oky, axis=1)


def conjugation_mask(grid):
    """Nodes whose rays only meet complete interpolation cells."""
    return _conjugation_mask(grid.key, grid)


@lru_cache(maxsize=16)
def _conjugation_mask(key, grid):
    dummy = Conductivity(GridFunction.constant(grid, 1.0), None, 1.0)
    return _ray_integral(dummy, lambda p: np.ones(p.shape), np.zeros(grid.size),
                         grid.nodes)[1]


def radial_conjugation(c, u):
    """I_f u on the grid nodes (u scalar)."""
    check_same_grid(c.f, u)
    _check_scalar(u)
    U = u.sc / c.values
    vals, _ = _ray_integral(c, lambda p: c.at(p) ** 2, U, c.grid.nodes)
    return GridFunction.scalar(c.grid, vals)


def inverse_radial_conjugation(c, v):
    """I_{1/f} v = ∫₀¹ f⁻²(tz)(y V_x − x V_y)(tz) dt with V = f v."""
    check_same_grid(c.f, v)
    _check_scalar(v)
    V = v.sc * c.values
    vals, _ = _ray_integral(c, lambda p: c.at(p) ** -2, V, c.grid.nodes)
    return GridFunction.scalar(c.grid, vals)


def metaharmonic_conjugate(c, u, const_c=0.0):
    """v = (I_f u + c) / f, returned as a scalar grid function."""
    I = radial_conjugation(c, u)
    return GridFunction.scalar(c.grid, (I.sc + const_c) / c.values)


def anti_conjugate(c, v, const_c=0.0):
    """u = −f I_{1/f} v + c f."""
    I = inverse_radial_conjugation(c, v)
    return GridFunction.scalar(c.grid, c.values * (const_c - I.sc))


def pair(u, v):
    """W = u + j v from two scalar grid functions."""
    check_same_grid(u, v)
    return GridFunction(u.grid, Bicomplex(u.sc, v.sc))


# ---- residuals -------------------------------------------------------------

def _harm(p, q):
    return 2 * p * q / (p + q)


def _conservative_residual(grid, sigma, U):
    """Σ_faces σ_face (U_nb − U_p)/h² at interior nodes (NaN elsewhere)."""
    out = np.zeros(grid.size, dtype=complex)
    for (dx, dy), h in (((1, 0), grid.hx), ((-1, 0), grid.hx),
                        ((0, 1), grid.hy), ((0, -1), grid.hy)):
        nb = grid.neighbor(dx, dy)
        ok = nb >= 0
        nbs = np.where(ok, nb, 0)
        out += np.where(ok, _harm(sigma, sigma[nbs]) * (U[nbs] - U) / h ** 2, 0)
    out[~grid.interior] = np.nan
    return out


def _max_over(vals, mask):
    return float(np.max(np.abs(vals[mask]), initial=0.0))


def conductivity_residuals(c, W, mask=None):
    """Max residuals of div(f²∇(u/f)) and div(f⁻²∇(f v)), scaled by h/‖W‖∞.

    ``mask`` selects the nodes (default: interior nodes at least 2h from Γ).
    """
    check_same_grid(c.f, W)
    grid = c.grid
    mask = grid.safe() if mask is None else mask
    f = c.values
    scale = grid.h / max(W.sup(), 1e-300)
    r1 = _conservative_residual(grid, f ** 2, W.sc / f)
    r2 = _conservative_residual(grid, f ** -2, W.vec * f)
    return _max_over(r1, mask) * scale, _max_over(r2, mask) * scale


def potentials(c):
    """(q_f, q_{1/f}) = (Δf/f, f Δ(1/f)) on the nodes."""
    f = c.values
    lap = c.laplacian_values()
    fx, fy = c.grad_f[0].sc, c.grad_f[1].sc
    qf = lap / f
    # Δ(1/f) = −Δf/f² + 2(f_x² + f_y²)/f³
    q_inv = -lap / f + 2 * (fx ** 2 + fy ** 2) / f ** 2
    return qf, q_inv


def schrodinger_residuals(c, W, mask=None):
    """Max of −Δu + q_f u and −Δv + q_{1/f} v, scaled by h/‖W‖∞."""
    check_same_grid(c.f, W)
    grid = c.grid
    mask = grid.safe() if mask is None else mask
    L = laplacian_matrix(grid)
    qf, q_inv = potentials(c)
    r1 = -(L @ W.sc) + qf * W.sc
    r2 = -(L @ W.vec) + q_inv * W.vec
    scale = grid.h / max(W.sup(), 1e-300)
    return _max_over(r1, mask) * scale, _max_over(r2, mask) * scale


def first_order_defect(c, W, mask=None):
    """Relative defect of u_x − v_y = (f_x u + f_y v)/f and u_y + v_x = (f_y u − f_x v)/f."""
    check_same_grid(c.f, W)
    grid = c.grid
    mask = grid.safe() if mask is None else mask
    u, v, f = W.sc, W.vec, c.values
    ux, uy = scalar_gradient(grid, u)
    vx, vy = scalar_gradient(grid, v)
    fx, fy = c.grad_f[0].sc, c.grad_f[1].sc
    e1 = ux - vy - (fx * u + fy * v) / f
    e2 = uy + vx - (fy * u - fx * v) / f
    return max(_max_over(e1, mask), _max_over(e2, mask)) / max(W.sup(), 1e-300)


def gradient_identity_defect(c, u, mask=None):
    """Relative max of ∇(I_f u) − (−f²U_y, f²U_x)."""
    grid = c.grid
    mask = grid.safe() & conjugation_mask(grid) if mask is None else mask
    I = radial_conjugation(c, u).sc
    Ix, Iy = scalar_gradient(grid, I)
    U = u.sc / c.values
    Ux, Uy = scalar_gradient(grid, U)
    f2 = c.values ** 2
    ex, ey = Ix + f2 * Uy, Iy - f2 * Ux
    ref = max(_max_over(f2 * Ux, mask), _max_over(f2 * Uy, mask), 1e-300)
    return max(_max_over(ex, mask), _max_over(ey, mask)) / ref


# ---- Dirichlet problem and Hilbert transform -------------------------------

def boundary_sampler(grid, phi):
    """Callable evaluating boundary data given as a function or as samples
    at ``grid.boundary_points`` (linear interpolation in the boundary parameter)."""
    if callable(phi):
        return lambda z: np.asarray(phi(z), dtype=complex) * np.ones(np.shape(z))
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != grid.boundary_points.shape:
        raise GridMismatch("boundary samples must match grid.boundary_points")
    dom = grid.domain
    s = dom.boundary_parameter(grid.boundary_points)
    order = np.argsort(s)
    s, vals = s[order], phi[order]
    period = 2 * np.pi if dom.kind == "disk" else 2 * ((dom.x1 - dom.x0) + (dom.y1 - dom.y0))

    def sample(z):
        q = dom.boundary_parameter(z)
        return (np.interp(q, s, vals.real, period=period)
                + 1j * np.interp(q, s, vals.imag, period=period))

    return sample


def dirichlet_solve(c, phi):
    """Solve div(f²∇U) = 0 with U = φ on Γ and return u = f U.

    Shortley-Weller five-point scheme in conservative form, with f² averaged
    harmonically on each face and exact grid-line/boundary intersections.
    """
    grid = c.grid
    dom = grid.domain
    sample = boundary_sampler(grid, phi)
    sig = c.values ** 2
    N = grid.size
    idx = np.arange(N)
    rows, cols, vals = [], [], []
    rhs = np.zeros(N, dtype=complex)
    diag = np.zeros(N, dtype=complex)
    for axis, h in ((0, grid.hx), (1, grid.hy)):
        arms, coefs, targets = [], [], []
        for sgn in (1, -1):
            dx, dy = (sgn, 0) if axis == 0 else (0, sgn)
            nb = grid.neighbor(dx, dy)
            has = nb >= 0
            direction = complex(dx, dy)
            theta = np.where(has, h, 0.0)
            zb = np.zeros(N, dtype=complex)
            cut = ~has
            if np.any(cut):
                tcut = np.clip(dom.exit_distance(grid.nodes[cut], direction), 1e-6 * h, h)
                theta[cut] = tcut
                zb[cut] = grid.nodes[cut] + tcut * direction
            sig_nb = np.where(has, sig[np.where(has, nb, 0)], 0)
            if np.any(cut):
                sig_nb[cut] = c.at(zb[cut]) ** 2 if c.func is not None else sig[cut]
            coefs.append(_harm(sig, sig_nb) / theta)
            arms.append(theta)
            targets.append((has, nb, cut, zb))
        span = arms[0] + arms[1]
        for coef, (has, nb, cut, zb) in zip(coefs, targets):
            k = 2 * coef / span
            diag -= k
            rows.append(idx[has])
            cols.append(nb[has])
            vals.append(k[has])
            if np.any(cut):
                rhs[cut] -= k[cut] * sample(zb[cut])
    rows.append(idx)
    cols.append(idx)
    vals.append(diag)
    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(N, N))
    U = spla.spsolve(A.tocsc(), rhs)
    if not np.all(np.isfinite(U)):
        raise SolverDivergence("Dirichlet solve produced non-finite values")
    return GridFunction.scalar(grid, c.values * U)


def hilbert_transform(c, phi):
    """H_f φ = tr_Γ((1/f) I_f u) where u/f solves the Dirichlet problem with data φ.

    Returns samples at ``grid.boundary_points``.
    """
    grid = c.grid
    u = dirichlet_solve(c, phi)
    U = u.sc / c.values
    zb = grid.boundary_points
    vals, _ = _ray_integral(c, lambda p: c.at(p) ** 2, U, zb)
    return vals / c.at(zb)
