"""Vekua operators Q and S = I − T Q, solution sets, Φ_a and Hodge generators.

All solves work in idempotent coordinates (W+, W-).  There the map
W ↦ aW + bW̄ is complex-linear,

    (QW)+ = a+ W+ + b+ W-,     (QW)- = a- W- + b- W+,

and T acts as B on the plus and A on the minus component.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .bicomplex import Bicomplex
from .calculus import GridFunction, analytic_power, check_same_grid, d, lp_norm
from .errors import SingularSystem, SolverDivergence, SupportViolation
from .integral import kernel_weights, theodorescu

NEUMANN_MARGIN = 0.9
DIRECT_MAX_UNKNOWNS = 2000
SINGULAR_RTOL = 1e-10


@dataclass
class Coefficients:
    a: GridFunction
    b: GridFunction

    def __post_init__(self):
        check_same_grid(self.a, self.b)

    @classmethod
    def zero(cls, grid):
        z = GridFunction.constant(grid, 0.0)
        return cls(z, z)

    @classmethod
    def constant(cls, grid, a=0.0, b=0.0):
        return cls(GridFunction.constant(grid, a), GridFunction.constant(grid, b))

    @property
    def grid(self):
        return self.a.grid

    @property
    def sup_a(self):
        return self.a.sup()

    @property
    def sup_b(self):
        return self.b.sup()

    @property
    def is_zero(self):
        return self.sup_a == 0 and self.sup_b == 0

    def contraction_factor(self):
        """2√2 · diam(Ω) · max(‖a‖∞, ‖b‖∞)."""
        return 2 * np.sqrt(2) * self.grid.domain.diameter * max(self.sup_a, self.sup_b)


@dataclass
class SolverReport:
    method: str
    iterations: int
    residual: float
    smallest_singular_value: float = None

    def to_dict(self):
        d = {"method": self.method, "iterations": self.iterations, "residual": self.residual}
        if self.smallest_singular_value is not None:
            d["smallest_singular_value"] = self.smallest_singular_value
        return d


@dataclass
class VekuaSolutionSet:
    coefficients: Coefficients
    solutions: list
    seeds: list
    reports: list = field(default_factory=list)

    @property
    def solver_report(self):
        methods = sorted({r.method for r in self.reports})
        return {"method": "+".join(methods) or "identity",
                "iterations": max((r.iterations for r in self.reports), default=0),
                "residual": max((r.residual for r in self.reports), default=0.0)}


def q_apply(c, W):
    check_same_grid(c.a, W)
    return c.a * W + c.b * W.bar()


def s_apply(c, W):
    return W - theodorescu(q_apply(c, W))


def _rel_residual(c, W, G):
    return lp_norm(s_apply(c, W) - G) / max(lp_norm(G), 1e-300)


def _split(F):
    return np.concatenate([F.plus, F.minus])


def _join(grid, x):
    N = grid.size
    return GridFunction(grid, Bicomplex.from_idempotent(x[:N], x[N:]))


def _s_linear_operator(c):
    grid = c.grid
    N = grid.size
    w = kernel_weights(grid)
    ap, am, bp, bm = c.a.plus, c.a.minus, c.b.plus, c.b.minus

    def mv(x):
        x = np.asarray(x).ravel()
        xp, xm = x[:N], x[N:]
        return np.concatenate([xp - w.apply_B(ap * xp + bp * xm),
                               xm - w.apply_A(am * xm + bm * xp)])

    return spla.LinearOperator((2 * N, 2 * N), matvec=mv, dtype=complex)


def _s_dense(c):
    w = kernel_weights(c.grid)
    A = w.matrix_A()
    # B = conj(A) entrywise since 1/(z* − ζ*) = (1/(z − ζ))*
    B = np.conj(A)
    ap, am, bp, bm = c.a.plus, c.a.minus, c.b.plus, c.b.minus
    top = np.hstack([B * ap[None, :], B * bp[None, :]])
    bot = np.hstack([A * bm[None, :], A * am[None, :]])
    return np.eye(2 * c.grid.size) - np.vstack([top, bot])


def _direct_factor(c):
    """SVD of the dense S, raising :class:`SingularSystem` on numerical rank loss."""
    U, s, Vh = sla.svd(_s_dense(c))
    smin = float(s[-1])
    if smin < SINGULAR_RTOL * s[0]:
        raise SingularSystem(f"smallest singular value {smin:.3e} indicates a nontrivial "
                             "kernel", smallest_singular_value=smin)
    return U, s, Vh


def _pick_method(c, n_unknowns):
    if c.contraction_factor() < NEUMANN_MARGIN:
        return "neumann"
    return "direct" if n_unknowns <= DIRECT_MAX_UNKNOWNS else "gmres"


def solve_s(c, G, tol=1e-10, method="auto", max_iter=500, fallback=True, factor=None):
    """Solve S W = G.

    Parameters
    ----------
    c : Coefficients
    G : GridFunction
    tol : float
        Target relative L² residual of S W − G.
    method : {"auto", "neumann", "direct", "gmres"}
        ``auto`` tries the Neumann series when the contraction bound holds
        with margin, then a dense SVD-checked solve for small systems, and
        restarted GMRES otherwise.
    fallback : bool
        Whether a Neumann run that fails to converge may hand over to the
        next method instead of raising :class:`SolverDivergence`.
    factor : tuple, optional
        Precomputed SVD of S for the direct method, reused across
        right-hand sides.

    Returns
    -------
    W : GridFunction
    report : SolverReport
    """
    check_same_grid(c.a, G)
    if c.is_zero:
        return G, SolverReport("identity", 0, 0.0)
    n_unknowns = 2 * G.grid.size
    if method == "auto":
        method = _pick_method(c, n_unknowns)

    if method == "neumann":
        W = G
        for it in range(1, max_iter + 1):
            W = G + theodorescu(q_apply(c, W))
            res = _rel_residual(c, W, G)
            if res <= tol:
                return W, SolverReport("neumann", it, res)
            if not np.isfinite(res):
                break
        if not fallback:
            raise SolverDivergence(f"Neumann series did not reach {tol} in {max_iter} steps")
        method = "direct" if n_unknowns <= DIRECT_MAX_UNKNOWNS else "gmres"

    if method == "direct":
        U, s, Vh = factor if factor is not None else _direct_factor(c)
        smin = float(s[-1])
        x = Vh.conj().T @ ((U.conj().T @ _split(G)) / s)
        W = _join(G.grid, x)
        return W, SolverReport("direct", 1, _rel_residual(c, W, G), smin)

    if method == "gmres":
        op = _s_linear_operator(c)
        b = _split(G)
        count = [0]

        def cb(_):
            count[0] += 1

        x, info = spla.gmres(op, b, rtol=tol * 0.1, atol=0.0, restart=200,
                             maxiter=max_iter, callback=cb, callback_type="pr_norm")
        W = _join(G.grid, x)
        res = _rel_residual(c, W, G)
        if info != 0 and res > tol * 100:
            raise SolverDivergence(f"GMRES stopped with residual {res:.3e}")
        return W, SolverReport("gmres", count[0], res)

    raise ValueError(f"unknown method {method!r}")


def monomial_seeds(grid, N):
    seeds = []
    for k in range(N):
        p = analytic_power(grid, 0.0, k)
        seeds += [p, p.times_j()]
    return seeds


def make_solution_set(c, N, **solver_kw):
    """Solve S W = G for the seeds ẑᵏ and j ẑᵏ, k = 0..N−1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    seeds = monomial_seeds(c.grid, N)
    method = solver_kw.get("method", "auto")
    if method == "auto" and not c.is_zero:
        method = _pick_method(c, 2 * c.grid.size)
    if method == "direct" and "factor" not in solver_kw:
        solver_kw = dict(solver_kw, factor=_direct_factor(c))
    sols, reports = [], []
    for G in seeds:
        W, rep = solve_s(c, G, **solver_kw)
        sols.append(W)
        reports.append(rep)
    return VekuaSolutionSet(c, sols, seeds, reports)


def phi_a(a):
    """Φ_a = exp(T a), a solution of ∂̄W = aW."""
    return theodorescu(a).exp()


def hodge_complement_element(c, phi, support_margin=3.0):
    """V = ∂φ + a†φ + b*φ̄ for φ vanishing within ``support_margin·h`` of Γ."""
    check_same_grid(c.a, phi)
    g = phi.grid
    near = g.distance < support_margin * g.h
    if np.any(phi.norm()[near] != 0):
        raise SupportViolation("φ must vanish near the boundary")
    return d(phi) + c.a.dagger() * phi + c.b.star() * phi.bar()


def bump(grid, center=0j, radius=0.5, value=1.0):
    """Smooth compactly supported bump exp(1 − 1/(1 − r²)) times ``value``."""
    r2 = np.abs(grid.nodes - center) ** 2 / radius ** 2
    with np.errstate(divide="ignore", over="ignore"):
        w = np.where(r2 < 1, np.exp(1 - 1 / (1 - np.minimum(r2, 1 - 1e-300))), 0.0)
    return GridFunction(grid, Bicomplex.coerce(value) * w.astype(complex))
