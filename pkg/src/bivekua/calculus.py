"""Grid functions and the discrete bicomplex Cauchy-Riemann calculus.

The derivative matrices use centred differences where both lattice
neighbours belong to the grid and first-order one-sided differences where
only one does.  Identities are meant to be checked on ``grid.interior``.
"""

import numpy as np
import scipy.sparse as sp

from .bicomplex import Bicomplex, hat_power
from .errors import GridMismatch


class GridFunction:
    """A bicomplex value per grid node.

    Parameters
    ----------
    grid : Grid
    values : Bicomplex
        Array-valued, one entry per node.
    """

    __slots__ = ("grid", "values")
    __array_ufunc__ = None

    def __init__(self, grid, values):
        values = Bicomplex.coerce(values)
        if np.ndim(values.sc) == 0:
            values = Bicomplex(np.full(grid.size, values.sc), np.full(grid.size, values.vec))
        if values.shape != (grid.size,):
            raise GridMismatch(f"expected {grid.size} values, got shape {values.shape}")
        self.grid = grid
        self.values = values

    @classmethod
    def from_callable(cls, grid, fn):
        """Sample ``fn(z)`` (complex array in, Bicomplex or complex out)."""
        return cls(grid, fn(grid.nodes))

    @classmethod
    def scalar(cls, grid, values):
        return cls(grid, Bicomplex(values, np.zeros(grid.size)))

    @classmethod
    def constant(cls, grid, value):
        value = Bicomplex.coerce(value)
        return cls(grid, Bicomplex(np.full(grid.size, value.sc), np.full(grid.size, value.vec)))

    @property
    def sc(self):
        return self.values.sc

    @property
    def vec(self):
        return self.values.vec

    @property
    def plus(self):
        return self.values.plus

    @property
    def minus(self):
        return self.values.minus

    def __len__(self):
        return self.grid.size

    def __repr__(self):
        return f"GridFunction({self.grid!r})"

    def _other(self, other):
        if isinstance(other, GridFunction):
            check_same_grid(self, other)
            return other.values
        return other

    def _wrap(self, values):
        return GridFunction(self.grid, values)

    def __add__(self, other):
        return self._wrap(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.values - self._other(other))

    def __rsub__(self, other):
        return self._wrap(self._other(other) - self.values)

    def __neg__(self):
        return self._wrap(-self.values)

    def __mul__(self, other):
        return self._wrap(self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._wrap(self.values / self._other(other))

    def __rtruediv__(self, other):
        return self._wrap(Bicomplex.coerce(self._other(other)) * self.values.inverse())

    def bar(self):
        return self._wrap(self.values.bar())

    def dagger(self):
        return self._wrap(self.values.dagger())

    def star(self):
        return self._wrap(self.values.star())

    def times_j(self):
        return self._wrap(self.values.times_j())

    def inverse(self):
        return self._wrap(self.values.inverse())

    def exp(self):
        return self._wrap(self.values.exp())

    def norm(self):
        """Pointwise |F|_B."""
        return self.values.norm()

    def sup(self, mask=None):
        n = self.norm()
        return float(np.max(n[mask] if mask is not None else n, initial=0.0))

    def is_scalar(self, tol=0.0):
        return bool(np.all(np.abs(self.vec) <= tol))


def check_same_grid(*fs):
    g = fs[0].grid
    for f in fs[1:]:
        if not g.same_as(f.grid):
            raise GridMismatch("grid functions live on different grids")
    return g


_DIFF_CACHE = {}


def diff_matrices(grid):
    """Sparse (Dx, Dy) acting on node vectors."""
    key = grid.key
    if key not in _DIFF_CACHE:
        _DIFF_CACHE[key] = (_diff_matrix(grid, 1, 0, grid.hx),
                            _diff_matrix(grid, 0, 1, grid.hy))
    return _DIFF_CACHE[key]


def _diff_matrix(grid, dx, dy, h):
    fwd = grid.neighbor(dx, dy)
    bwd = grid.neighbor(-dx, -dy)
    idx = np.arange(grid.size)
    both = (fwd >= 0) & (bwd >= 0)
    only_f = (fwd >= 0) & (bwd < 0)
    only_b = (fwd < 0) & (bwd >= 0)
    rows, cols, vals = [], [], []

    def add(mask, c, v):
        rows.append(idx[mask])
        cols.append(c[mask])
        vals.append(np.full(mask.sum(), v))

    add(both, fwd, 0.5 / h)
    add(both, bwd, -0.5 / h)
    add(only_f, fwd, 1 / h)
    add(only_f, idx, -1 / h)
    add(only_b, idx, 1 / h)
    add(only_b, bwd, -1 / h)
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(grid.size, grid.size))


def partials(F):
    """(F_x, F_y) as GridFunctions."""
    Dx, Dy = diff_matrices(F.grid)
    v = F.values
    return (GridFunction(F.grid, Bicomplex(Dx @ v.sc, Dx @ v.vec)),
            GridFunction(F.grid, Bicomplex(Dy @ v.sc, Dy @ v.vec)))


def scalar_gradient(grid, u):
    """Finite-difference gradient of a complex node vector."""
    Dx, Dy = diff_matrices(grid)
    return Dx @ u, Dy @ u


def d_bar(F):
    """½(∂x + j∂y) F."""
    Fx, Fy = partials(F)
    return GridFunction(F.grid, (Fx.values + Fy.values.times_j()) * 0.5)


def d(F):
    """½(∂x − j∂y) F."""
    Fx, Fy = partials(F)
    return GridFunction(F.grid, (Fx.values - Fy.values.times_j()) * 0.5)


def integrate(F):
    """Midpoint quadrature ∬ F dA."""
    v = F.values
    return Bicomplex(np.sum(v.sc), np.sum(v.vec)) * F.grid.cell_area


def inner_l2(F, G):
    """⟨F, G⟩ = ∬ ⟨F(z), G(z)⟩_B dA, linear in F."""
    check_same_grid(F, G)
    return complex(np.sum(F.values.inner(G.values)) * F.grid.cell_area)


def lp_norm(F, p=2):
    if p == np.inf or p == "inf":
        return F.sup()
    if p < 1:
        raise ValueError("p must be >= 1")
    return float((np.sum(F.norm() ** p) * F.grid.cell_area) ** (1 / p))


def analytic_power(grid, z0=0.0, n=1):
    if n < 0:
        raise ValueError("analytic_power needs n >= 0")
    return GridFunction(grid, hat_power(grid.nodes, z0, n))


def vekua_residual(W, a, b):
    """∂̄W − aW − bW̄ on every node; meaningful on ``grid.interior``."""
    check_same_grid(W, a, b)
    return d_bar(W) - a * W - b * W.bar()


def laplacian_matrix(grid):
    """Five-point Laplacian rows; only valid on ``grid.interior``."""
    idx = np.arange(grid.size)
    rows, cols, vals = [], [], []
    for (dx, dy), h in (((1, 0), grid.hx), ((-1, 0), grid.hx),
                        ((0, 1), grid.hy), ((0, -1), grid.hy)):
        nb = grid.neighbor(dx, dy)
        ok = nb >= 0
        rows += [idx[ok], idx[ok]]
        cols += [nb[ok], idx[ok]]
        vals += [np.full(ok.sum(), 1 / h ** 2), np.full(ok.sum(), -1 / h ** 2)]
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(grid.size, grid.size))
