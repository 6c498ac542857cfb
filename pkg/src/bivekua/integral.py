"""Theodorescu, adjoint Theodorescu and boundary Cauchy operators.

In idempotent coordinates the Theodorescu transform splits into the two
complex planar Cauchy transforms

    A g(z) = (1/π) ∬ g(ζ) / (z − ζ) dA,     B g(z) = (1/π) ∬ g(ζ) / (z* − ζ*) dA,

with T W = p+ B W+ + p- A W- and T* W = −p+ A W+ − p- B W-.  Both are
midpoint sums over grid nodes.  The self cell is a centred square whose
exact contribution vanishes by odd symmetry, so the diagonal weight is 0.
The sums are lattice convolutions and are evaluated with zero-padded FFTs.
"""

import json
from pathlib import Path

import numpy as np
import scipy.fft as sfft

from .bicomplex import Bicomplex
from .calculus import GridFunction, check_same_grid, d_bar
from .errors import FileError, GridMismatch, PointTooCloseToBoundary


class KernelWeights:
    """Precomputed FFT of the lattice kernel 1/(z − ζ) for one grid.

    Attributes
    ----------
    self_correction : Bicomplex
        Singular-cell contribution per node (identically zero for the
        centred square cells used here).
    """

    def __init__(self, grid):
        self.grid = grid
        n = grid.n
        k = np.arange(-(n - 1), n)
        DX, DY = np.meshgrid(k * grid.hx, k * grid.hy, indexing="ij")
        off = DX + 1j * DY
        with np.errstate(divide="ignore", invalid="ignore"):
            ker = np.where(off == 0, 0.0, 1.0 / off)
        ker *= grid.cell_area / np.pi
        self.shape = (sfft.next_fast_len(2 * n - 1), sfft.next_fast_len(2 * n - 1))
        self._fa = sfft.fft2(ker, self.shape)
        self._fb = sfft.fft2(np.conj(ker), self.shape)
        self.self_correction = Bicomplex(np.zeros(grid.size), np.zeros(grid.size))

    def _conv(self, fk, g):
        grid, n = self.grid, self.grid.n
        lat = np.zeros((n, n), dtype=complex)
        lat[grid.ix, grid.iy] = g
        out = sfft.ifft2(sfft.fft2(lat, self.shape) * fk)
        return out[n - 1:2 * n - 1, n - 1:2 * n - 1][grid.ix, grid.iy]

    def apply_A(self, g):
        return self._conv(self._fa, g)

    def apply_B(self, g):
        return self._conv(self._fb, g)

    def matrix_A(self):
        """Dense N×N matrix of A (entries h²/(π(z_p − z_q)), zero diagonal)."""
        z = self.grid.nodes
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        M = self.grid.cell_area / (np.pi * diff)
        np.fill_diagonal(M, 0.0)
        return M


_WEIGHTS = {}


def kernel_weights(grid):
    if grid.key not in _WEIGHTS:
        _WEIGHTS[grid.key] = KernelWeights(grid)
    return _WEIGHTS[grid.key]


def cauchy_A(grid, g):
    return kernel_weights(grid).apply_A(np.asarray(g, dtype=complex))


def cauchy_B(grid, g):
    return kernel_weights(grid).apply_B(np.asarray(g, dtype=complex))


def theodorescu(F):
    """T F = p+ B F+ + p- A F-."""
    w = kernel_weights(F.grid)
    return GridFunction(F.grid, Bicomplex.from_idempotent(w.apply_B(F.plus), w.apply_A(F.minus)))


def theodorescu_adjoint(F):
    """T* F = −p+ A F+ − p- B F-."""
    w = kernel_weights(F.grid)
    return GridFunction(F.grid, Bicomplex.from_idempotent(-w.apply_A(F.plus), -w.apply_B(F.minus)))


def _boundary_values(grid, phi):
    if callable(phi):
        return Bicomplex.coerce(phi(grid.boundary_points))
    phi = Bicomplex.coerce(phi)
    if phi.shape != grid.boundary_points.shape:
        raise GridMismatch("boundary data must match the grid's boundary samples")
    return phi


def cauchy_boundary(grid, phi, z=None, margin=2.0):
    """C_Γ φ(z) = (1/2πj) ∫_Γ φ(ζ) / (ζ̂ − ẑ) dζ̂ by the trapezoid rule.

    Parameters
    ----------
    grid : Grid
        Supplies the boundary samples (points, tangents, arc weights).
    phi : callable or Bicomplex
        Boundary data, either a function of the boundary point or samples
        at ``grid.boundary_points``.
    z : array_like, optional
        Evaluation points.  When omitted the result is a GridFunction on
        the nodes at distance ``>= margin * h`` from the boundary, and NaN
        on the remaining nodes.

    Returns
    -------
    Bicomplex or GridFunction
    """
    vals = _boundary_values(grid, phi)
    zeta = grid.boundary_points
    dzeta = grid.boundary_tangents * grid.boundary_weights
    if z is None:
        ok = grid.distance >= margin * grid.h
        pts = grid.nodes[ok]
    else:
        pts = np.atleast_1d(np.asarray(z, dtype=complex))
        if np.any(grid.domain.distance_to_boundary(pts) < margin * grid.h):
            raise PointTooCloseToBoundary("evaluation point within "
                                          f"{margin}h of the boundary")
    diff = zeta[None, :] - pts[:, None]
    # plus component: conjugate of the classical Cauchy integral of (φ+)*
    minus = (vals.minus[None, :] * dzeta / diff).sum(axis=1) / (2j * np.pi)
    plus = np.conj((np.conj(vals.plus)[None, :] * dzeta / diff).sum(axis=1) / (2j * np.pi))
    out = Bicomplex.from_idempotent(plus, minus)
    if z is not None:
        return out if np.ndim(z) else out[0]
    sc = np.full(grid.size, np.nan, dtype=complex)
    vec = np.full(grid.size, np.nan, dtype=complex)
    sc[ok], vec[ok] = out.sc, out.vec
    return GridFunction(grid, Bicomplex(sc, vec))


def borel_pompeiu_residual(grid, W, margin=2.0):
    """max |C_Γ[tr W] + T[∂̄W] − W|_B over nodes at distance ≥ margin·h.

    ``W`` is a callable so that its boundary trace is exact.
    """
    Wg = GridFunction.from_callable(grid, W)
    lhs = cauchy_boundary(grid, W, margin=margin) + theodorescu(d_bar(Wg))
    ok = grid.interior & (grid.distance >= margin * grid.h)
    return float(np.max((lhs - Wg).norm()[ok]))


def adjoint_defect(F, G):
    """|⟨TF, G⟩ − ⟨F, T*G⟩| / (‖F‖‖G‖)."""
    from .calculus import inner_l2, lp_norm
    check_same_grid(F, G)
    lhs = inner_l2(theodorescu(F), G)
    rhs = inner_l2(F, theodorescu_adjoint(G))
    return abs(lhs - rhs) / (lp_norm(F) * lp_norm(G))


def save_weight_matrix(grid, path):
    """Write the dense A matrix as little-endian complex128, row-major,
    with a JSON sidecar ``<path>.json``."""
    path = Path(path)
    M = kernel_weights(grid).matrix_A()
    try:
        M.astype("<c16").tofile(path)
        meta = {"domain": grid.domain.to_dict(), "n": grid.n, "nodes": grid.size,
                "dtype": "<c16", "order": "C", "operator": "A"}
        path.with_name(path.name + ".json").write_text(json.dumps(meta, indent=2))
    except OSError as exc:
        raise FileError(str(exc)) from exc


def load_weight_matrix(grid, path):
    path = Path(path)
    try:
        meta = json.loads(path.with_name(path.name + ".json").read_text())
        M = np.fromfile(path, dtype="<c16")
    except OSError as exc:
        raise FileError(str(exc)) from exc
    if meta.get("n") != grid.n or meta.get("domain") != grid.domain.to_dict():
        raise GridMismatch("cached weight matrix belongs to another grid")
    return M.reshape(grid.size, grid.size)
