"""Orthonormal bases, truncated reproducing kernels and the Vekua-Bergman projection.

For an orthonormal family {Φ_n} the kernel is

    𝒦(A; z, ζ) = Σ ⟨A, Φ_n(ζ)⟩_B Φ_n(z),   K = 𝒦(1; ·),   L = 𝒦(j; ·),

so 𝒦(A) = Sc A · K + Vec A · L.  Projection is done in coefficient space,
P Ψ = Σ ⟨Ψ, Φ_n⟩ Φ_n, which equals the kernel quadrature exactly.
"""

from dataclasses import dataclass

import numpy as np

from .bicomplex import Bicomplex
from .calculus import GridFunction, check_same_grid
from .errors import EmptyBasis, GridMismatch, WrongCoefficients

DROP_RTOL = 1e-8


@dataclass
class KernelSample:
    z: complex
    zeta: complex
    K: Bicomplex
    L: Bicomplex


class OrthoBasis:
    """Orthonormal members stored as rows of (sc, vec) arrays.

    Attributes
    ----------
    sc, vec : ndarray, shape (M, nodes)
    dropped : list of int
        Indices of source solutions removed as linearly dependent.
    """

    def __init__(self, grid, sc, vec, source=None, dropped=()):
        self.grid = grid
        self.sc = sc
        self.vec = vec
        self.source = source
        self.dropped = list(dropped)

    def __len__(self):
        return self.sc.shape[0]

    @property
    def members(self):
        return [GridFunction(self.grid, Bicomplex(s, v)) for s, v in zip(self.sc, self.vec)]

    def gram(self):
        M = np.hstack([self.sc, self.vec])
        return (M @ M.conj().T) * self.grid.cell_area

    @property
    def gram_residual(self):
        G = self.gram()
        return float(np.max(np.abs(G - np.eye(len(self)))))

    def coefficients(self, Psi):
        """⟨Ψ, Φ_n⟩ for every member."""
        if not self.grid.same_as(Psi.grid):
            raise GridMismatch("function lives on another grid")
        return (self.sc.conj() @ Psi.sc + self.vec.conj() @ Psi.vec) * self.grid.cell_area

    def _idx(self, z):
        return self.grid.node_index(z)


def gram_schmidt(solution_set):
    """Modified Gram-Schmidt with one reorthogonalization pass.

    Accepts a :class:`VekuaSolutionSet` or a plain list of GridFunctions.
    """
    funcs = getattr(solution_set, "solutions", solution_set)
    if not funcs:
        raise EmptyBasis("no functions to orthonormalize")
    grid = funcs[0].grid
    check_same_grid(*funcs)
    w = np.sqrt(grid.cell_area)
    N = grid.size
    basis, dropped = [], []
    for k, F in enumerate(funcs):
        v = np.concatenate([F.sc, F.vec]) * w
        n0 = np.linalg.norm(v)
        for _ in range(2):
            for q in basis:
                v = v - (q.conj() @ v) * q
        nv = np.linalg.norm(v)
        if n0 == 0 or nv < DROP_RTOL * n0:
            dropped.append(k)
            continue
        basis.append(v / nv)
    if not basis:
        raise EmptyBasis("every member was linearly dependent")
    M = np.array(basis) / w
    source = solution_set if hasattr(solution_set, "solutions") else None
    return OrthoBasis(grid, M[:, :N], M[:, N:], source=source, dropped=dropped)


def kernel_pair(basis, z, zeta):
    """(K(z, ζ), L(z, ζ)) at grid nodes."""
    i, k = basis._idx(z), basis._idx(zeta)
    cs, cv = basis.sc[:, k].conj(), basis.vec[:, k].conj()
    K = Bicomplex(cs @ basis.sc[:, i], cs @ basis.vec[:, i])
    L = Bicomplex(cv @ basis.sc[:, i], cv @ basis.vec[:, i])
    return K, L


def kernel_eval(basis, A, z, zeta):
    """𝒦(A; z, ζ) = Σ ⟨A, Φ_n(ζ)⟩_B Φ_n(z)."""
    A = Bicomplex.coerce(A)
    i, k = basis._idx(z), basis._idx(zeta)
    c = A.sc * basis.sc[:, k].conj() + A.vec * basis.vec[:, k].conj()
    return Bicomplex(c @ basis.sc[:, i], c @ basis.vec[:, i])


def kernel_matrices(basis, idx_z, idx_zeta):
    """Blocks of Sc/Vec of K and L for index sets, shape (len(z), len(ζ))."""
    S, V = basis.sc, basis.vec
    Sz, Vz = S[:, idx_z].T, V[:, idx_z].T
    Sw, Vw = S[:, idx_zeta].conj(), V[:, idx_zeta].conj()
    return {"K_sc": Sz @ Sw, "K_vec": Vz @ Sw, "L_sc": Sz @ Vw, "L_vec": Vz @ Vw}


def kernel_samples(basis, zs, zetas):
    return [KernelSample(complex(z), complex(w), *kernel_pair(basis, z, w))
            for z in zs for w in zetas]


def reproduce(basis, W, z):
    """∬ 𝒦(W(ζ); z, ζ) dA_ζ at node z."""
    c = basis.coefficients(W)
    i = basis._idx(z)
    return Bicomplex(c @ basis.sc[:, i], c @ basis.vec[:, i])


def project(basis, Psi):
    """P Ψ = Σ ⟨Ψ, Φ_n⟩ Φ_n."""
    c = basis.coefficients(Psi)
    return GridFunction(basis.grid, Bicomplex(c @ basis.sc, c @ basis.vec))


def symmetry_defect(basis, idx):
    """Largest violation of the three kernel relations on idx × idx."""
    B = kernel_matrices(basis, idx, idx)
    e1 = np.abs(B["K_sc"] - B["K_sc"].conj().T).max()
    e2 = np.abs(B["L_vec"] - B["L_vec"].conj().T).max()
    e3 = np.abs(B["L_sc"] - B["K_vec"].conj().T).max()
    return float(max(e1, e2, e3))


def b_zero_reduction_check(basis, idx=None):
    """max |L(z, ζ) − j K(z, ζ)|_B over idx × idx (200 spread nodes by default)."""
    src = basis.source
    if src is None or src.coefficients.sup_b != 0:
        raise WrongCoefficients("reduction L = jK needs a basis built with b ≡ 0")
    if idx is None:
        idx = np.unique(np.linspace(0, basis.grid.size - 1, 200).astype(int))
    B = kernel_matrices(basis, idx, idx)
    # j K = −Vec K + j Sc K
    d_sc = B["L_sc"] + B["K_vec"]
    d_vec = B["L_vec"] - B["K_sc"]
    return float(np.sqrt(np.abs(d_sc) ** 2 + np.abs(d_vec) ** 2).max())
