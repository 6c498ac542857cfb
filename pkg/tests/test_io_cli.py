import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bivekua.vekua as vk
from bivekua import io
from bivekua.bergman import KernelSample, gram_schmidt
from bivekua.bicomplex import Bicomplex
from bivekua.calculus import GridFunction
from bivekua.cli import main, parse_config_text
from bivekua.domain import Domain, build_grid
from bivekua.errors import ConfigError, FileError, GridMismatch
from bivekua.vekua import Coefficients, make_solution_set

floats = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(floats, floats, floats, floats), min_size=1, max_size=8))
def test_bicomplex_csv_bit_identical(tmp_path_factory, rows):
    path = tmp_path_factory.mktemp("csv") / "b.csv"
    a = np.array(rows)
    W = Bicomplex(a[:, 0] + 1j * a[:, 1], a[:, 2] + 1j * a[:, 3])
    io.write_bicomplex_csv(path, W)
    R = io.read_bicomplex_csv(path)
    assert np.array_equal(R.sc.view(np.uint64), W.sc.view(np.uint64))
    assert np.array_equal(R.vec.view(np.uint64), W.vec.view(np.uint64))


def test_grid_function_round_trip(tmp_path, disk32):
    rng = np.random.default_rng(1)
    r = rng.normal(size=(4, disk32.size)) / 3
    F = GridFunction(disk32, Bicomplex(r[0] + 1j * r[1], r[2] + 1j * r[3]))
    io.write_grid_function_csv(tmp_path / "f.csv", F)
    G = io.read_grid_function_csv(tmp_path / "f.csv", disk32)
    assert np.array_equal(G.sc, F.sc) and np.array_equal(G.vec, F.vec)
    with pytest.raises(GridMismatch):
        io.read_grid_function_csv(tmp_path / "f.csv", build_grid(Domain.disk(), 16))
    (tmp_path / "bad.csv").write_text("a,b\n1,2\n")
    with pytest.raises(FileError):
        io.read_grid_function_csv(tmp_path / "bad.csv", disk32)
    with pytest.raises(FileError):
        io.read_bicomplex_csv(tmp_path / "missing.csv")


def test_boundary_and_kernel_round_trip(tmp_path):
    th = np.linspace(0, 1, 7)
    vals = np.exp(1j * th) / 7
    io.write_boundary_csv(tmp_path / "b.csv", th, vals)
    t2, v2 = io.read_boundary_csv(tmp_path / "b.csv")
    assert np.array_equal(t2, th) and np.array_equal(v2, vals)
    s = [KernelSample(0.1 + 0.2j, -0.3j, Bicomplex(1 / 3, 2j / 7), Bicomplex(-1e-300, np.pi))]
    io.write_kernel_csv(tmp_path / "k.csv", s)
    r = io.read_kernel_csv(tmp_path / "k.csv")[0]
    assert r.z == s[0].z and r.zeta == s[0].zeta
    assert r.K.sc == s[0].K.sc and r.L.vec == s[0].L.vec


def test_basis_archive(tmp_path, disk32):
    B = gram_schmidt(make_solution_set(Coefficients.zero(disk32), 2))
    io.save_basis_archive(tmp_path / "basis", B)
    B2 = io.load_basis_archive(tmp_path / "basis", disk32)
    assert np.array_equal(B2.sc, B.sc) and np.array_equal(B2.vec, B.vec)
    with pytest.raises(GridMismatch):
        io.load_basis_archive(tmp_path / "basis", build_grid(Domain.disk(), 16))


def test_config_parsing():
    cfg = parse_config_text('{"kind": "disk", "center": [0, 0], "radius": 1.0, "n": 48}')
    assert cfg.n == 48 and cfg.domain == Domain.disk()
    cfg2 = parse_config_text('{"domain": {"kind": "disk"}, "n": 48}')
    assert cfg.hash == cfg2.hash and len(cfg.hash) == 16
    with pytest.raises(ConfigError, match="line 2, column"):
        parse_config_text('{"kind": "disk",\n  "radius": }')
    with pytest.raises(ConfigError):
        parse_config_text('{"kind": "triangle"}')


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_small_grid_skips(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--n", "8", "--out", str(tmp_path))
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("[")]
    assert len(lines) == 12
    assert sum("skipped: below minimum n (32)" in l for l in lines) == 8
    rep = json.loads((tmp_path / "verify_report.json").read_text())
    assert rep["failed"] == [] and len(rep["config_hash"]) == 16


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--n", "8", "--tol", "algebra=0")
    assert code == 1 and "[FAIL]  1" in out


def test_config_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "disk",\n "radius": ]')
    code, _, err = run(capsys, "dump-grid", "--config", str(bad))
    assert code == 2 and "line 2" in err
    assert run(capsys, "dump-grid", "--n", "4")[0] == 2
    assert run(capsys, "verify", "--n", "8", "--tol", "nonsense=1")[0] == 2
    code, _, err = run(capsys, "kernel", "--n", "16", "--z", "0.123+0.1j", "--zeta", "0")
    assert code == 2 and "not a grid node" in err
    rect = tmp_path / "rect.json"
    rect.write_text('{"kind": "rectangle", "x0": 1, "x1": 2, "y0": 1, "y1": 2}')
    assert run(capsys, "conjugate", "--config", str(rect), "--n", "16")[0] == 2


def test_numeric_failure_exit_3(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(vk, "SINGULAR_RTOL", 2.0)
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"domain": {"kind": "disk"}, "n": 12, "basis_order": 1,
                               "coefficients": {"kind": "constants", "a": 1.0}}))
    code, _, err = run(capsys, "project", "--config", str(cfg))
    assert code == 3 and "singular" in err


def test_kernel_origin(capsys):
    # n odd puts a node at the origin, where K = 1/π on the unit disk
    code, out, _ = run(capsys, "kernel", "--n", "33", "--basis-order", "8",
                       "--z", "0", "--zeta", "0")
    assert code == 0
    header, row = out.strip().splitlines()
    vals = dict(zip(header.split(","), map(float, row.split(","))))
    assert abs(vals["K_sc_re"] - 1 / np.pi) <= 1e-2
    code, out, _ = run(capsys, "kernel", "--n", "32", "--z", "0.001", "--zeta", "0", "--snap")
    assert code == 0 and len(out.strip().splitlines()) == 2
    code, out, _ = run(capsys, "kernel", "--n", "16", "--basis-order", "2")
    assert code == 0 and out.strip() == ",".join(io.KERNEL_HEADER)


def test_conjugate_and_hilbert_outputs(capsys, tmp_path):
    code, _, _ = run(capsys, "conjugate", "--n", "32", "--u", "x", "--out", str(tmp_path))
    assert code == 0
    g = build_grid(Domain.disk(), 32)
    v = io.read_grid_function_csv(tmp_path / "v.csv", g)
    assert np.max(np.abs(v.sc - g.nodes.imag)) <= 1e-12
    rep = json.loads((tmp_path / "conjugate_report.json").read_text())
    assert rep["conductivity"] == "one" and "config_hash" in rep

    code, _, _ = run(capsys, "hilbert", "--n", "32", "--phi", "cos", "--out", str(tmp_path))
    assert code == 0
    th, H = io.read_boundary_csv(tmp_path / "hilbert.csv")
    assert np.max(np.abs(H - np.sin(th))) <= 5e-2
    code, _, _ = run(capsys, "hilbert", "--n", "32", "--input", str(tmp_path / "hilbert.csv"),
                     "--out", str(tmp_path / "h2"))
    _, H2 = io.read_boundary_csv(tmp_path / "h2" / "hilbert.csv")
    assert code == 0 and np.max(np.abs(H2 + np.cos(th))) <= 5e-2


def test_deterministic_output(capsys):
    a = run(capsys, "project", "--n", "16", "--basis-order", "2", "--seed", "4")[1]
    b = run(capsys, "project", "--n", "16", "--basis-order", "2", "--seed", "4")[1]
    assert a == b and a.startswith("x,y,")
    grid_csv = run(capsys, "dump-grid", "--n", "16")[1]
    assert len(grid_csv.splitlines()) == build_grid(Domain.disk(), 16).size + 1
