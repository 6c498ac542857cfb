"""Command-line driver.

Subcommands: verify, kernel, project, conjugate, hilbert, dump-grid.
Exit codes: 0 ok, 1 check failure, 2 configuration/input error, 3 numerical failure.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .bergman import gram_schmidt, kernel_samples, project
from .bicomplex import Bicomplex, parse_bicomplex
from .calculus import GridFunction, vekua_residual
from .domain import MIN_N, Domain, build_grid
from .errors import (ConfigError, DegenerateDomain, EmptyBasis, FileError, GridMismatch,
                     NodeNotOnGrid, NotProper, NotScalar, NotStarShaped, SingularSystem,
                     SolverDivergence, WrongCoefficients, ZeroDivisor)
from .main_vekua import (CATALOG, b_from_f, catalog, conjugation_mask, hilbert_transform,
                         metaharmonic_conjugate, pair)
from .vekua import Coefficients, make_solution_set
from .verification import DEFAULT_TOLERANCES, Context, run_all

INPUT_ERRORS = (ConfigError, FileError, NodeNotOnGrid, GridMismatch, NotStarShaped, NotScalar,
                NotProper, WrongCoefficients, DegenerateDomain)
NUMERIC_ERRORS = (SolverDivergence, SingularSystem, ZeroDivisor, EmptyBasis)


@dataclass
class RunConfig:
    domain: Domain = field(default_factory=Domain.disk)
    n: int = 64
    coefficients: dict = field(default_factory=lambda: {"kind": "zero"})
    basis_order: int = 16
    tol: dict = field(default_factory=dict)
    out: Path = None

    def validate(self):
        if self.n < MIN_N:
            raise ConfigError(f"n must be >= {MIN_N}")
        if self.basis_order < 1:
            raise ConfigError("basis order must be >= 1")
        kind = self.coefficients.get("kind")
        if kind == "conductivity" and self.coefficients.get("formula") not in CATALOG:
            raise ConfigError(f"conductivity formula must be one of {CATALOG}")
        if kind not in ("zero", "constants", "conductivity"):
            raise ConfigError(f"unknown coefficient kind {kind!r}")
        unknown = sorted(set(self.tol) - set(DEFAULT_TOLERANCES))
        if unknown:
            raise ConfigError(f"unknown tolerance keys {unknown}")
        return self

    def to_dict(self):
        return {"domain": self.domain.to_dict(), "n": self.n, "coefficients": self.coefficients,
                "basis_order": self.basis_order, "tol": self.tol}

    @property
    def hash(self):
        return io.config_hash(self.to_dict())


def parse_config_text(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: "
                          f"{exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    cfg = RunConfig()
    # a bare domain spec is accepted as a config
    dom = raw.get("domain", raw if "kind" in raw else None)
    if dom is not None:
        cfg.domain = Domain.from_dict(dom)
        if "n" in dom:
            cfg.n = int(dom["n"])
    for key in ("n", "basis_order"):
        if key in raw:
            setattr(cfg, key, int(raw[key]))
    if "coefficients" in raw:
        cfg.coefficients = dict(raw["coefficients"])
    if "tol" in raw:
        cfg.tol = {k: float(v) for k, v in raw["tol"].items()}
    return cfg


def load_config(args):
    if getattr(args, "config", None):
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        cfg = parse_config_text(text)
    else:
        cfg = RunConfig()
    if getattr(args, "n", None) is not None:
        cfg.n = args.n
    if getattr(args, "basis_order", None) is not None:
        cfg.basis_order = args.basis_order
    for item in getattr(args, "tol", None) or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"--tol expects KEY=VAL, got {item!r}")
        try:
            cfg.tol[key] = float(val)
        except ValueError as exc:
            raise ConfigError(f"--tol {key}: not a number") from exc
    out = getattr(args, "out", None)
    cfg.out = Path(out) if out else None
    return cfg.validate()


def _bicomplex_value(v):
    if isinstance(v, str):
        try:
            return parse_bicomplex(v)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if isinstance(v, (int, float)):
        return Bicomplex(v, 0.0)
    if isinstance(v, list) and len(v) == 4:
        return Bicomplex(complex(v[0], v[1]), complex(v[2], v[3]))
    raise ConfigError(f"cannot read bicomplex constant {v!r}")


def build_problem(cfg, grid):
    """(Coefficients, Conductivity or None) for the configured coefficients."""
    spec = cfg.coefficients
    if spec["kind"] == "zero":
        return Coefficients.zero(grid), None
    if spec["kind"] == "constants":
        return Coefficients.constant(grid, _bicomplex_value(spec.get("a", 0.0)),
                                     _bicomplex_value(spec.get("b", 0.0))), None
    cond = catalog(spec["formula"], grid)
    return b_from_f(cond), cond


def _conductivity(cfg, grid):
    _, cond = build_problem(cfg, grid)
    return cond if cond is not None else catalog("one", grid)


def _dest(cfg, name):
    if cfg.out is None:
        return "-"
    cfg.out.mkdir(parents=True, exist_ok=True)
    return cfg.out / name


def _emit_report(cfg, name, report):
    report = dict(report, config_hash=cfg.hash)
    if cfg.out is None:
        print(json.dumps(report, indent=2, sort_keys=True), file=sys.stderr)
    else:
        io.write_json(_dest(cfg, name), report)


def _complex_list(text):
    if not text:
        return []
    try:
        return [complex(s.strip().replace(" ", "")) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad complex list {text!r}") from exc


# ---- subcommands -----------------------------------------------------------

def cmd_verify(cfg, args):
    ctx = Context(n=cfg.n, basis_order=cfg.basis_order, tol=cfg.tol)
    t = time.perf_counter()
    checks = run_all(ctx)
    for c in checks:
        print(c.line())
    failed = [c.number for c in checks if c.status == "FAIL"]
    total = time.perf_counter() - t
    n_skip = sum(c.status == "SKIP" for c in checks)
    print(f"{len(checks) - len(failed) - n_skip} passed, {len(failed)} failed, {n_skip} skipped "
          f"in {total:.1f}s (config {cfg.hash})")
    if cfg.out is not None:
        _emit_report(cfg, "verify_report.json",
                     {"checks": [c.to_dict() for c in checks], "failed": failed,
                      "total_seconds": total})
    return 1 if failed else 0


def _basis(cfg, grid):
    coef, _ = build_problem(cfg, grid)
    return gram_schmidt(make_solution_set(coef, cfg.basis_order))


def cmd_kernel(cfg, args):
    grid = build_grid(cfg.domain, cfg.n)
    zs, zetas = _complex_list(args.z), _complex_list(args.zeta)
    if args.snap:
        zs = [grid.nodes[grid.nearest_node(z)] for z in zs]
        zetas = [grid.nodes[grid.nearest_node(z)] for z in zetas]
    for z in zs + zetas:
        grid.node_index(z)
    basis = _basis(cfg, grid)
    io.write_kernel_csv(_dest(cfg, "kernel.csv"), kernel_samples(basis, zs, zetas))
    if cfg.out is not None:
        _emit_report(cfg, "kernel_report.json", {"basis_size": len(basis),
                                                 "gram_residual": basis.gram_residual})
    return 0


def cmd_project(cfg, args):
    grid = build_grid(cfg.domain, cfg.n)
    if args.input:
        Psi = io.read_grid_function_csv(args.input, grid)
    else:
        r = np.random.default_rng(args.seed).normal(size=(4, grid.size))
        Psi = GridFunction(grid, Bicomplex(r[0] + 1j * r[1], r[2] + 1j * r[3]))
    basis = _basis(cfg, grid)
    io.write_grid_function_csv(_dest(cfg, "projected.csv"), project(basis, Psi))
    if cfg.out is not None:
        _emit_report(cfg, "project_report.json", {"basis_size": len(basis)})
    return 0


U_FORMULAS = {
    "x": lambda z, f: z.real + 0j,
    "y": lambda z, f: z.imag + 0j,
    "x2-y2": lambda z, f: (z ** 2).real + 0j,
    "f": lambda z, f: f,
    "one": lambda z, f: np.ones_like(z),
}


def cmd_conjugate(cfg, args):
    grid = build_grid(cfg.domain, cfg.n)
    if not cfg.domain.star_shaped_at_origin:
        raise NotStarShaped("conjugation needs a domain star-shaped about the origin")
    cond = _conductivity(cfg, grid)
    if args.u in U_FORMULAS:
        u = GridFunction.scalar(grid, U_FORMULAS[args.u](grid.nodes, cond.values))
    else:
        u = io.read_grid_function_csv(args.u, grid)
    try:
        const = complex(args.c.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"bad constant {args.c!r}") from exc
    v = metaharmonic_conjugate(cond, u, const)
    coef = b_from_f(cond)
    W = pair(u, v)
    mask = grid.safe() & conjugation_mask(grid)
    res = float(np.max(vekua_residual(W, coef.a, coef.b).norm()[mask], initial=0.0))
    if cfg.out is None:
        io.write_grid_function_csv("-", v)
    else:
        io.write_grid_function_csv(_dest(cfg, "u.csv"), u)
        io.write_grid_function_csv(_dest(cfg, "v.csv"), v)
    _emit_report(cfg, "conjugate_report.json",
                 {"conductivity": cond.name, "c": [const.real, const.imag],
                  "vekua_residual_max": res,
                  "vekua_residual_rel": res / max(W.sup(), 1e-300)})
    return 0


PHI_FORMULAS = {
    "cos": lambda z, cond: np.cos(np.angle(z)) + 0j,
    "sin": lambda z, cond: np.sin(np.angle(z)) + 0j,
    "one": lambda z, cond: np.ones(np.shape(z), dtype=complex),
    "trace_f": lambda z, cond: cond.at(z),
}


def cmd_hilbert(cfg, args):
    grid = build_grid(cfg.domain, cfg.n)
    if not cfg.domain.star_shaped_at_origin:
        raise NotStarShaped("Hilbert transform needs a domain star-shaped about the origin")
    cond = _conductivity(cfg, grid)
    if args.input:
        theta, vals = io.read_boundary_csv(args.input)
        if theta.size == 0:
            raise ConfigError("empty boundary data")
        order = np.argsort(theta)
        theta, vals = theta[order], vals[order]
        dom = cfg.domain
        period = (2 * np.pi if dom.kind == "disk"
                  else 2 * ((dom.x1 - dom.x0) + (dom.y1 - dom.y0)))

        def phi(z):
            q = dom.boundary_parameter(z)
            return (np.interp(q, theta, vals.real, period=period)
                    + 1j * np.interp(q, theta, vals.imag, period=period))
    else:
        formula = PHI_FORMULAS[args.phi]
        phi = lambda z: formula(z, cond)
    H = hilbert_transform(cond, phi)
    io.write_boundary_csv(_dest(cfg, "hilbert.csv"),
                          cfg.domain.boundary_parameter(grid.boundary_points), H)
    return 0


def cmd_dump_grid(cfg, args):
    grid = build_grid(cfg.domain, cfg.n)
    io.write_grid_csv(_dest(cfg, "grid.csv"), grid)
    return 0


COMMANDS = {"verify": cmd_verify, "kernel": cmd_kernel, "project": cmd_project,
            "conjugate": cmd_conjugate, "hilbert": cmd_hilbert, "dump-grid": cmd_dump_grid}


def build_parser():
    # SUPPRESS keeps a subparser from resetting flags given before the subcommand
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON run configuration or domain spec")
    common.add_argument("--out", help="output directory (CSV goes to stdout when omitted)")
    common.add_argument("--n", type=int, help="grid resolution")
    common.add_argument("--basis-order", type=int, help="number of seed degrees N")
    common.add_argument("--tol", action="append", metavar="KEY=VAL",
                        help="override a verification tolerance")
    parser = argparse.ArgumentParser(prog="bivekua", description=__doc__.splitlines()[0],
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    k = sub.add_parser("kernel", parents=[common], help="sample K and L at node pairs")
    k.add_argument("--z", default="", help="comma-separated complex nodes, e.g. 0.3+0.2j")
    k.add_argument("--zeta", default="")
    k.add_argument("--snap", action="store_true", help="move points to the nearest node")
    p = sub.add_parser("project", parents=[common], help="Vekua-Bergman projection of a field")
    p.add_argument("--input", help="GridFunction CSV on the configured grid")
    p.add_argument("--seed", type=int, default=0, help="random field seed when no input")
    c = sub.add_parser("conjugate", parents=[common], help="metaharmonic conjugate of u")
    c.add_argument("--u", default="x", help=f"one of {sorted(U_FORMULAS)} or a CSV path")
    c.add_argument("--c", default="0", help="additive constant")
    h = sub.add_parser("hilbert", parents=[common], help="boundary Hilbert transform H_f")
    g = h.add_mutually_exclusive_group()
    g.add_argument("--input", help="boundary CSV (theta, value_re, value_im)")
    g.add_argument("--phi", default="cos", choices=sorted(PHI_FORMULAS))
    sub.add_parser("dump-grid", parents=[common], help="write grid node coordinates")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg, args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
