"""CSV and JSON readers/writers.  Floats are written with 17 significant
digits so every file round-trips bit-identically."""

import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from .bicomplex import Bicomplex
from .calculus import GridFunction
from .errors import FileError, GridMismatch

BICOMPLEX_HEADER = ["sc_re", "sc_im", "vec_re", "vec_im"]
GRID_FUNCTION_HEADER = ["x", "y"] + BICOMPLEX_HEADER
BOUNDARY_HEADER = ["theta", "value_re", "value_im"]
KERNEL_HEADER = (["z_re", "z_im", "zeta_re", "zeta_im"]
                 + [f"{k}_{part}_{ri}" for k in "KL" for part in ("sc", "vec") for ri in ("re", "im")])


def fmt(x):
    return f"{float(x):.17g}"


def _write_rows(path, header, rows):
    """Write a CSV file, or stdout when ``path`` is "-"."""
    if str(path) == "-":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise FileError(f"cannot write {path}: {exc}") from exc


def _read_rows(path, header):
    try:
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            head = next(r, None)
            if head != header:
                raise FileError(f"{path}: expected header {header}, got {head}")
            return np.array([[float(v) for v in row] for row in r if row],
                            dtype=float).reshape(-1, len(header))
    except OSError as exc:
        raise FileError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise FileError(f"{path}: malformed number ({exc})") from exc


def _bc_cols(v):
    return [v.sc.real, v.sc.imag, v.vec.real, v.vec.imag]


def write_bicomplex_csv(path, values):
    v = Bicomplex.coerce(values)
    v = Bicomplex(np.atleast_1d(v.sc), np.atleast_1d(v.vec))
    rows = zip(*([fmt(x) for x in col] for col in _bc_cols(v)))
    _write_rows(path, BICOMPLEX_HEADER, rows)


def read_bicomplex_csv(path):
    a = _read_rows(path, BICOMPLEX_HEADER)
    return Bicomplex(a[:, 0] + 1j * a[:, 1], a[:, 2] + 1j * a[:, 3])


def write_grid_function_csv(path, F):
    cols = [F.grid.nodes.real, F.grid.nodes.imag] + _bc_cols(F.values)
    _write_rows(path, GRID_FUNCTION_HEADER, zip(*([fmt(x) for x in c] for c in cols)))


def read_grid_function_csv(path, grid):
    a = _read_rows(path, GRID_FUNCTION_HEADER)
    z = a[:, 0] + 1j * a[:, 1]
    if z.shape != grid.nodes.shape or np.max(np.abs(z - grid.nodes), initial=0) > 1e-9 * grid.h:
        raise GridMismatch(f"{path} does not sample the given grid")
    return GridFunction(grid, Bicomplex(a[:, 2] + 1j * a[:, 3], a[:, 4] + 1j * a[:, 5]))


def write_grid_csv(path, grid):
    _write_rows(path, ["x", "y"], ((fmt(z.real), fmt(z.imag)) for z in grid.nodes))


def write_boundary_csv(path, theta, values):
    values = np.asarray(values, dtype=complex)
    _write_rows(path, BOUNDARY_HEADER,
                ((fmt(t), fmt(v.real), fmt(v.imag)) for t, v in zip(theta, values)))


def read_boundary_csv(path):
    a = _read_rows(path, BOUNDARY_HEADER)
    return a[:, 0], a[:, 1] + 1j * a[:, 2]


def write_kernel_csv(path, samples):
    rows = []
    for s in samples:
        vals = [s.z.real, s.z.imag, s.zeta.real, s.zeta.imag]
        for B in (s.K, s.L):
            vals += [B.sc.real, B.sc.imag, B.vec.real, B.vec.imag]
        rows.append([fmt(v) for v in vals])
    _write_rows(path, KERNEL_HEADER, rows)


def read_kernel_csv(path):
    from .bergman import KernelSample
    a = _read_rows(path, KERNEL_HEADER)
    return [KernelSample(complex(r[0], r[1]), complex(r[2], r[3]),
                         Bicomplex(complex(r[4], r[5]), complex(r[6], r[7])),
                         Bicomplex(complex(r[8], r[9]), complex(r[10], r[11]))) for r in a]


def config_hash(obj):
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def write_json(path, obj):
    try:
        Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise FileError(f"cannot write {path}: {exc}") from exc


def save_basis_archive(directory, basis):
    """One GridFunction CSV per member plus ``manifest.json``."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise FileError(str(exc)) from exc
    names = []
    for k, member in enumerate(basis.members):
        name = f"phi_{k:03d}.csv"
        write_grid_function_csv(directory / name, member)
        names.append(name)
    write_json(directory / "manifest.json",
               {"grid": basis.grid.to_dict(), "members": names, "dropped": basis.dropped,
                "gram_residual": basis.gram_residual})


def load_basis_archive(directory, grid):
    from .bergman import OrthoBasis
    directory = Path(directory)
    try:
        manifest = json.loads((directory / "manifest.json").read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FileError(f"bad basis archive {directory}: {exc}") from exc
    if manifest["grid"] != grid.to_dict():
        raise GridMismatch("basis archive was built on another grid")
    members = [read_grid_function_csv(directory / m, grid) for m in manifest["members"]]
    return OrthoBasis(grid, np.array([m.sc for m in members]), np.array([m.vec for m in members]),
                      dropped=manifest.get("dropped", ()))
