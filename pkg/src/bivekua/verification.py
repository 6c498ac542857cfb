"""Quantitative acceptance checks shared by the test-suite and ``bivekua verify``.

Each ``criterion_*`` function returns a :class:`Check` made of one or more
measurements compared against a tolerance.  Expensive objects (grids,
solution sets, bases) are shared through a :class:`Context`.
"""

import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .bergman import b_zero_reduction_check, gram_schmidt, kernel_matrices, project, symmetry_defect
from .bicomplex import Bicomplex, hat
from .calculus import GridFunction, d_bar, inner_l2, lp_norm, vekua_residual
from .domain import Domain, build_grid
from .integral import adjoint_defect, borel_pompeiu_residual, theodorescu
from .main_vekua import (anti_conjugate, b_from_f, catalog, conductivity_residuals,
                         conjugation_mask, dirichlet_solve, hilbert_transform, interpolate,
                         metaharmonic_conjugate, pair)
from .vekua import Coefficients, bump, hodge_complement_element, make_solution_set

MIN_ACCURACY_N = 32

DEFAULT_TOLERANCES = {
    "algebra": 1e-12, "algebra_seconds": 1.0,
    "theodorescu": 5e-2, "theodorescu_ratio": 1.5, "theodorescu_seconds": 30.0,
    "inversion": 5e-2,
    "adjoint": 1e-10,
    "borel_pompeiu": 5e-2,
    "disk_kernel": 1e-2, "disk_kernel_seconds": 120.0,
    "projection_idempotent": 1e-10, "projection_selfadjoint": 1e-10, "projection_hodge": 5e-2,
    "vekua_solutions": 5e-2, "trivial_solutions": 1e-10,
    "conductivity": 5e-2,
    "conjugate_linear": 1e-3, "conjugate_quadratic": 5e-3, "conjugate_residual": 5e-2,
    "conjugate_round_trip": 5e-2,
    "hilbert": 5e-2, "hilbert_involution": 5e-2,
    "kernel_symmetry": 1e-8, "b_zero_exact": 1e-8, "b_zero_numerical": 5e-2,
}


@dataclass
class Measurement:
    label: str
    value: float
    tol: float
    kind: str = "max"   # "max": value <= tol, "min": value >= tol

    @property
    def passed(self):
        ok = self.value <= self.tol if self.kind == "max" else self.value >= self.tol
        return bool(np.isfinite(self.value) and ok)

    def to_dict(self):
        return {"label": self.label, "value": self.value, "tol": self.tol,
                "kind": self.kind, "passed": self.passed}


@dataclass
class Check:
    number: int
    name: str
    measurements: list = field(default_factory=list)
    skipped: str = None
    seconds: float = 0.0

    @property
    def passed(self):
        return self.skipped is None and all(m.passed for m in self.measurements)

    @property
    def status(self):
        if self.skipped:
            return "SKIP"
        return "PASS" if self.passed else "FAIL"

    def line(self):
        if self.skipped:
            return f"[{self.status}] {self.number:2d} {self.name}: {self.skipped}"
        parts = ", ".join(f"{m.label}={m.value:.3g} ({'<=' if m.kind == 'max' else '>='}"
                          f" {m.tol:g})" for m in self.measurements)
        return f"[{self.status}] {self.number:2d} {self.name}: {parts} [{self.seconds:.1f}s]"

    def to_dict(self):
        return {"criterion": self.number, "name": self.name, "status": self.status,
                "skipped": self.skipped, "seconds": self.seconds,
                "measurements": [m.to_dict() for m in self.measurements]}


class Context:
    """Lazily built objects shared between criteria.

    Parameters
    ----------
    n : int
        Base resolution (64 by default); the refinement check also uses 2n
        and the disk-kernel check 3n/2.
    basis_order : int
        Seed degrees for the a = b = 0 basis.
    """

    def __init__(self, n=64, basis_order=16, tol=None, seed=20240611):
        self.n = int(n)
        self.basis_order = int(basis_order)
        self.tol = dict(DEFAULT_TOLERANCES)
        self.tol.update(tol or {})
        self.rng = np.random.default_rng(seed)

    def random_field(self, grid):
        r = self.rng.normal(size=(4, grid.size))
        return GridFunction(grid, Bicomplex(r[0] + 1j * r[1], r[2] + 1j * r[3]))

    @cached_property
    def unit_grid(self):
        return build_grid(Domain.disk(), self.n)

    @cached_property
    def small_grid(self):
        return build_grid(Domain.disk(0j, 0.8), self.n)

    @cached_property
    def zero_basis(self):
        c = Coefficients.zero(self.unit_grid)
        return gram_schmidt(make_solution_set(c, self.basis_order))

    @cached_property
    def exp_conductivity(self):
        return catalog("exp_x", self.small_grid)

    @cached_property
    def exp_solutions(self):
        return make_solution_set(b_from_f(self.exp_conductivity), 8)

    @cached_property
    def exp_basis(self):
        return gram_schmidt(self.exp_solutions)


def _timed(fn):
    def run(ctx):
        t = time.perf_counter()
        check = fn(ctx)
        check.seconds = time.perf_counter() - t
        return check
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _needs_resolution(ctx, number, name):
    if ctx.n < MIN_ACCURACY_N:
        return Check(number, name, skipped=f"skipped: below minimum n ({MIN_ACCURACY_N})")
    return None


# ---- 1: algebra ----------------------------------------------------------

def _random_bicomplex(rng, m, scale=1.0):
    r = rng.normal(size=(4, m)) * scale
    return Bicomplex(r[0] + 1j * r[1], r[2] + 1j * r[3])


def algebra_errors(rng, m=10_000):
    """Largest deviations of the algebra identities on ``m`` random samples."""
    W, V, U = (_random_bicomplex(rng, m) for _ in range(3))
    Ws, Vs = _random_bicomplex(rng, m, 0.5), _random_bicomplex(rng, m, 0.5)

    def dev(X, Y):
        X, Y = Bicomplex.coerce(X), Bicomplex.coerce(Y)
        return float(np.max(np.abs(X.sc - Y.sc) + np.abs(X.vec - Y.vec)))

    def violation(lhs, rhs):
        return float(max(np.max(lhs - rhs), 0.0))

    nW, nV = W.norm(), V.norm()
    ap, am = np.abs(W.plus), np.abs(W.minus)
    jmul = W * Bicomplex.from_idempotent(1 / W.plus, 1 / W.minus)
    out = {
        "associativity": dev((W * V) * U, W * (V * U)),
        "commutativity": dev(W * V, V * W),
        "distributivity": dev(W * (V + U), W * V + W * U),
        "schoolbook_product": dev(W * V, Bicomplex(W.sc * V.sc - W.vec * V.vec,
                                                   W.sc * V.vec + W.vec * V.sc)),
        "idempotent_roundtrip": dev(Bicomplex.from_idempotent(W.plus, W.minus), W),
        "norm_split": float(np.max(np.abs(nW ** 2 - (ap ** 2 + am ** 2) / 2))),
        "bar_involution": dev(W.bar().bar(), W),
        "dagger_involution": dev(W.dagger().dagger(), W),
        "star_involution": dev(W.star().star(), W),
        "bar_multiplicative": dev((W * V).bar(), W.bar() * V.bar()),
        "dagger_multiplicative": dev((W * V).dagger(), W.dagger() * V.dagger()),
        "w_wbar": dev(W * W.bar(), W.sc ** 2 + W.vec ** 2),
        "inverse": dev(jmul, 1.0),
        "product_norm_bound": violation((W * V).norm(), np.sqrt(2) * nW * nV),
        "norm_lower_bound": violation(np.maximum(ap, am) / np.sqrt(2), nW),
        "norm_upper_bound": violation(nW, (ap + am) / np.sqrt(2)),
        "j_skew": float(np.max(np.abs(W.inner(V.times_j()) + W.times_j().inner(V)))),
        "exp_homomorphism": dev((Ws + Vs).exp(), Ws.exp() * Vs.exp()),
        "exp_inverse": dev(Ws.exp() * (-Ws).exp(), 1.0),
    }
    return out


@_timed
def criterion_1(ctx):
    t = time.perf_counter()
    errs = algebra_errors(ctx.rng)
    elapsed = time.perf_counter() - t
    return Check(1, "bicomplex algebra suite",
                 [Measurement("max_error", max(errs.values()), ctx.tol["algebra"]),
                  Measurement("seconds", elapsed, ctx.tol["algebra_seconds"])])


# ---- 2-5: integral operators ----------------------------------------------

def theodorescu_oracle_error(grid):
    """max over interior nodes of |T[1] − (x − jy)|_B on the unit disk."""
    T1 = theodorescu(GridFunction.constant(grid, 1.0))
    exact = Bicomplex(grid.nodes.real, -grid.nodes.imag)
    return float(np.max((T1.values - exact).norm()[grid.interior]))


@_timed
def criterion_2(ctx):
    skip = _needs_resolution(ctx, 2, "Theodorescu oracle T[1] = x - jy")
    if skip:
        return skip
    t = time.perf_counter()
    e1 = theodorescu_oracle_error(ctx.unit_grid)
    e2 = theodorescu_oracle_error(build_grid(Domain.disk(), 2 * ctx.n))
    return Check(2, "Theodorescu oracle T[1] = x - jy",
                 [Measurement(f"error_n{ctx.n}", e1, ctx.tol["theodorescu"]),
                  Measurement("refinement_ratio", e1 / e2, ctx.tol["theodorescu_ratio"], "min"),
                  Measurement("seconds", time.perf_counter() - t, ctx.tol["theodorescu_seconds"])])


@_timed
def criterion_3(ctx):
    skip = _needs_resolution(ctx, 3, "inversion d_bar T F = F")
    if skip:
        return skip
    g = ctx.unit_grid
    F = GridFunction.from_callable(g, lambda z: hat(z) ** 2 + Bicomplex(0, np.sin(z.real)))
    r = (d_bar(theodorescu(F)) - F).norm()[g.interior]
    rel = float(np.sqrt(np.sum(r ** 2) / np.sum(F.norm()[g.interior] ** 2)))
    return Check(3, "inversion d_bar T F = F", [Measurement("rel_l2", rel, ctx.tol["inversion"])])


@_timed
def criterion_4(ctx):
    g = build_grid(Domain.disk(), max(ctx.n, 8))
    worst = max(adjoint_defect(ctx.random_field(g), ctx.random_field(g)) for _ in range(5))
    return Check(4, "adjoint identity <TF,G> = <F,T*G>",
                 [Measurement("rel_defect", worst, ctx.tol["adjoint"])])


@_timed
def criterion_5(ctx):
    skip = _needs_resolution(ctx, 5, "Borel-Pompeiu formula")
    if skip:
        return skip
    g = ctx.unit_grid
    r1 = borel_pompeiu_residual(g, lambda z: hat(z) ** 2)
    r2 = borel_pompeiu_residual(g, lambda z: Bicomplex(z.real, -z.imag))
    return Check(5, "Borel-Pompeiu formula",
                 [Measurement("residual_zhat2", r1, ctx.tol["borel_pompeiu"]),
                  Measurement("residual_x_minus_jy", r2, ctx.tol["borel_pompeiu"])])


# ---- 6, 7, 12: kernels and projection ---------------------------------------

def disk_kernel_error(n, N, radius=0.5):
    """Relative error of the minus component of K against 1/(π(1 − zζ*)²)."""
    g = build_grid(Domain.disk(), n)
    basis = gram_schmidt(make_solution_set(Coefficients.zero(g), N))
    idx = np.nonzero(np.abs(g.nodes) <= radius)[0]
    B = kernel_matrices(basis, idx, idx)
    Km = B["K_sc"] + 1j * B["K_vec"]
    z = g.nodes[idx]
    exact = 1 / (np.pi * (1 - z[:, None] * np.conj(z)[None, :]) ** 2)
    return float(np.max(np.abs(Km - exact) / np.abs(exact)))


@_timed
def criterion_6(ctx):
    name = "classical disk Bergman kernel"
    skip = _needs_resolution(ctx, 6, name)
    if skip:
        return skip
    t = time.perf_counter()
    n_kernel = 3 * ctx.n // 2
    err = disk_kernel_error(n_kernel, 16)
    return Check(6, name, [Measurement(f"rel_error_n{n_kernel}", err, ctx.tol["disk_kernel"]),
                           Measurement("seconds", time.perf_counter() - t,
                                       ctx.tol["disk_kernel_seconds"])])


def projection_laws(ctx, basis, trials=20):
    g = basis.grid
    idem, adj = 0.0, 0.0
    for _ in range(trials):
        Psi, Phi = ctx.random_field(g), ctx.random_field(g)
        P1 = project(basis, Psi)
        idem = max(idem, lp_norm(project(basis, P1) - P1) / lp_norm(Psi))
        lhs = inner_l2(P1, Phi)
        rhs = inner_l2(Psi, project(basis, Phi))
        adj = max(adj, abs(lhs - rhs) / (lp_norm(Psi) * lp_norm(Phi)))
    return idem, adj


def hodge_leakage(basis, coefficients):
    """max ‖PV‖/‖V‖ over a few bump-generated Hodge complement elements."""
    g = basis.grid
    R = g.domain.radius if g.domain.kind == "disk" else 0.5 * g.domain.diameter
    bumps = [bump(g, 0.1 * R + 0.05j * R, 0.6 * R, Bicomplex(1.0, 0.5j)),
             bump(g, -0.2 * R, 0.5 * R, Bicomplex(0.0, 1.0)),
             bump(g, 0.15j * R, 0.55 * R, Bicomplex(1j, -0.3))]
    worst = 0.0
    for phi in bumps:
        V = hodge_complement_element(coefficients, phi)
        worst = max(worst, lp_norm(project(basis, V)) / lp_norm(V))
    return worst


@_timed
def criterion_7(ctx):
    name = "projection laws"
    idem, adj = projection_laws(ctx, ctx.zero_basis)
    ms = [Measurement("idempotency", idem, ctx.tol["projection_idempotent"]),
          Measurement("self_adjointness", adj, ctx.tol["projection_selfadjoint"])]
    if ctx.n >= MIN_ACCURACY_N:
        ms.append(Measurement("hodge_zero", hodge_leakage(ctx.zero_basis,
                                                           Coefficients.zero(ctx.unit_grid)),
                              ctx.tol["projection_hodge"]))
        ms.append(Measurement("hodge_exp_x", hodge_leakage(ctx.exp_basis,
                                                            ctx.exp_solutions.coefficients),
                              ctx.tol["projection_hodge"]))
    return Check(7, name, ms)


def _spread_nodes(grid, k=10):
    """k node indices spread over the interior."""
    inside = np.nonzero(grid.interior)[0]
    return inside[np.linspace(0, inside.size - 1, k).astype(int)]


@_timed
def criterion_12(ctx):
    name = "kernel symmetry and b = 0 reduction"
    g = ctx.unit_grid
    idx = _spread_nodes(g)
    sym = max(symmetry_defect(ctx.zero_basis, idx),
              symmetry_defect(ctx.exp_basis, _spread_nodes(ctx.small_grid)))
    exact = b_zero_reduction_check(ctx.zero_basis, idx)
    ca = Coefficients.constant(g, a=Bicomplex(0.4, 0.2j))
    basis_a = gram_schmidt(make_solution_set(ca, 6))
    numerical = b_zero_reduction_check(basis_a, idx)
    return Check(12, name, [Measurement("symmetry", sym, ctx.tol["kernel_symmetry"]),
                            Measurement("L_minus_jK_zero", exact, ctx.tol["b_zero_exact"]),
                            Measurement("L_minus_jK_const_a", numerical,
                                        ctx.tol["b_zero_numerical"])])


# ---- 8-11: main Vekua ------------------------------------------------------

@_timed
def criterion_8(ctx):
    name = "main-Vekua solution generation (f = e^x)"
    skip = _needs_resolution(ctx, 8, name)
    if skip:
        return skip
    S = ctx.exp_solutions
    c = S.coefficients
    g = ctx.small_grid
    safe = g.safe()
    worst = max(float(np.max(vekua_residual(W, c.a, c.b).norm()[safe])) / W.sup()
                for W in S.solutions)
    f = ctx.exp_conductivity.f
    trivial = max(float(np.max(vekua_residual(W, c.a, c.b).norm()[g.interior])) / W.sup()
                  for W in (f, (1 / f).times_j()))
    return Check(8, name, [Measurement("max_rel_residual", worst, ctx.tol["vekua_solutions"]),
                           Measurement("trivial_f_and_j_over_f", trivial,
                                       ctx.tol["trivial_solutions"])])


@_timed
def criterion_9(ctx):
    name = "conductivity equations for Sc W and Vec W"
    skip = _needs_resolution(ctx, 9, name)
    if skip:
        return skip
    cond = ctx.exp_conductivity
    r = np.max([conductivity_residuals(cond, W) for W in ctx.exp_solutions.solutions], axis=0)
    return Check(9, name, [Measurement("div_f2_grad_U", float(r[0]), ctx.tol["conductivity"]),
                           Measurement("div_f-2_grad_V", float(r[1]), ctx.tol["conductivity"])])


@_timed
def criterion_10(ctx):
    name = "metaharmonic conjugates"
    skip = _needs_resolution(ctx, 10, name)
    if skip:
        return skip
    g = ctx.unit_grid
    one = catalog("one", g)
    x, y = g.nodes.real, g.nodes.imag
    ok = conjugation_mask(g)
    v1 = metaharmonic_conjugate(one, GridFunction.scalar(g, x))
    v2 = metaharmonic_conjugate(one, GridFunction.scalar(g, x ** 2 - y ** 2))
    e1 = float(np.max(np.abs(v1.sc - y)[ok]))
    e2 = float(np.max(np.abs(v2.sc - 2 * x * y)[ok]))

    cond = ctx.exp_conductivity
    coef = ctx.exp_solutions.coefficients
    gs = ctx.small_grid
    mask = gs.safe() & conjugation_mask(gs)
    # smooth Dirichlet data plus the scalar parts of the low-degree solutions
    data = [lambda z: np.cos(np.angle(z)), lambda z: np.sin(np.angle(z)),
            lambda z: np.cos(2 * np.angle(z)) + np.sin(np.angle(z)),
            lambda z: np.cos(3 * np.angle(z)), lambda z: np.sin(4 * np.angle(z))]
    sources = [dirichlet_solve(cond, phi) for phi in data]
    sources += [GridFunction.scalar(gs, W.sc) for W in ctx.exp_solutions.solutions[:8:2]]
    res, trip = 0.0, 0.0
    for u in sources:
        v = metaharmonic_conjugate(cond, u)
        W = pair(u, v)
        res = max(res, float(np.max(vekua_residual(W, coef.a, coef.b).norm()[mask])) / W.sup())
        # u/f at the ray origin fixes the free multiple of f
        U0 = interpolate(gs, u.sc / cond.values, np.array([0j]))[0][0]
        u2 = anti_conjugate(cond, v, U0)
        trip = max(trip, float(np.max(np.abs(u2.sc - u.sc)[mask]) / np.max(np.abs(u.sc))))
    return Check(10, name, [Measurement("x_to_y", e1, ctx.tol["conjugate_linear"]),
                            Measurement("x2-y2_to_2xy", e2, ctx.tol["conjugate_quadratic"]),
                            Measurement("exp_x_residual", res, ctx.tol["conjugate_residual"]),
                            Measurement("round_trip", trip, ctx.tol["conjugate_round_trip"])])


@_timed
def criterion_11(ctx):
    name = "Hilbert transform on the unit circle (f = 1)"
    skip = _needs_resolution(ctx, 11, name)
    if skip:
        return skip
    g = ctx.unit_grid
    one = catalog("one", g)
    th = np.angle(g.boundary_points)
    H = hilbert_transform(one, lambda z: np.real(z) / np.abs(z))
    e1 = float(np.max(np.abs(H - np.sin(th))))
    phi = np.cos(th) + 0.5 * np.sin(2 * th) + 0.3
    HH = hilbert_transform(one, hilbert_transform(one, phi))
    e2 = float(np.max(np.abs(HH - (-phi + phi.mean()))))
    return Check(11, name, [Measurement("cos_to_sin", e1, ctx.tol["hilbert"]),
                            Measurement("involution", e2, ctx.tol["hilbert_involution"])])


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def run_all(ctx=None, only=None):
    ctx = ctx or Context()
    return [fn(ctx) for k, fn in enumerate(CRITERIA, start=1) if only is None or k in only]
