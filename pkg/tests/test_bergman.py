import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bivekua.bergman import (b_zero_reduction_check, gram_schmidt, kernel_eval, kernel_matrices,
                             kernel_pair, kernel_samples, project, reproduce, symmetry_defect)
from bivekua.bicomplex import Bicomplex, hat
from bivekua.calculus import GridFunction, inner_l2, lp_norm
from bivekua.domain import Domain, build_grid
from bivekua.errors import EmptyBasis, NodeNotOnGrid, WrongCoefficients
from bivekua.vekua import Coefficients, make_solution_set
from bivekua.verification import disk_kernel_error


@pytest.fixture(scope="module")
def basis32(disk32):
    return gram_schmidt(make_solution_set(Coefficients.zero(disk32), 6))


def test_first_members_normalization(disk32):
    one = GridFunction.constant(disk32, 1.0)
    zh = GridFunction.from_callable(disk32, hat)
    B = gram_schmidt([one, zh])
    assert len(B) == 2 and B.gram_residual < 1e-12
    phi0, phi1 = B.members
    assert phi0.values.allclose(1 / np.sqrt(np.pi), atol=2e-2)
    # ẑ is orthogonal to 1 on a symmetric grid; its norm is sqrt(π/2)
    ref = zh * np.sqrt(2 / np.pi)
    assert lp_norm(phi1 - ref) <= 2e-2 * lp_norm(ref)


def test_dependent_members_dropped(disk32):
    one = GridFunction.constant(disk32, 1.0)
    zh = GridFunction.from_callable(disk32, hat)
    B = gram_schmidt([one, zh, one * 3.0, zh + one])
    assert len(B) == 2 and B.dropped == [2, 3]
    with pytest.raises(EmptyBasis):
        gram_schmidt([])
    with pytest.raises(EmptyBasis):
        gram_schmidt([GridFunction.constant(disk32, 0.0)])


def test_orthonormality(basis32):
    assert len(basis32) == 12
    assert basis32.gram_residual <= 1e-10


def test_kernel_pair_matches_eval(basis32, disk32):
    z, w = disk32.nodes[10], disk32.nodes[200]
    K, L = kernel_pair(basis32, z, w)
    assert kernel_eval(basis32, 1.0, z, w).allclose(K, atol=1e-14)
    assert kernel_eval(basis32, Bicomplex(0, 1), z, w).allclose(L, atol=1e-14)
    with pytest.raises(NodeNotOnGrid):
        kernel_pair(basis32, 0.123456 + 0.1j, w)
    s = kernel_samples(basis32, [z], [w, z])
    assert len(s) == 2 and s[0].K.allclose(K)


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_kernel_real_linear(basis32, disk32, a, b, c, d):
    z, w = disk32.nodes[57], disk32.nodes[321]
    A = Bicomplex(complex(a, b), complex(c, d))
    K = kernel_eval(basis32, A, z, w)
    # 𝒦(A) = Sc A · K + Vec A · L, complex-linear in each part
    Ks, Lj = kernel_pair(basis32, z, w)
    assert K.allclose(Ks * A.sc + Lj * A.vec, atol=1e-10 * (1 + abs(a) + abs(b) + abs(c) + abs(d)))


def test_symmetry(basis32, disk32):
    idx = np.arange(0, disk32.size, 37)
    assert symmetry_defect(basis32, idx) <= 1e-12


def test_reproduction_of_members(basis32, disk32):
    W = basis32.members[3] * 2.0 - basis32.members[7]
    for k in (5, 99, 400):
        z = disk32.nodes[k]
        assert reproduce(basis32, W, z).allclose(W.values[k], atol=1e-10)


def test_projection_laws(basis32, disk32):
    rng = np.random.default_rng(3)
    for _ in range(3):
        r = rng.normal(size=(4, disk32.size))
        Psi = GridFunction(disk32, Bicomplex(r[0] + 1j * r[1], r[2] + 1j * r[3]))
        Phi = GridFunction(disk32, Bicomplex(r[3] - 1j * r[0], r[1]))
        P = project(basis32, Psi)
        assert lp_norm(project(basis32, P) - P) <= 1e-10 * lp_norm(Psi)
        assert abs(inner_l2(P, Phi) - inner_l2(Psi, project(basis32, Phi))) <= 1e-10 * (
            lp_norm(Psi) * lp_norm(Phi))
        assert lp_norm(P) <= lp_norm(Psi) * (1 + 1e-12)
    member = basis32.members[4]
    assert lp_norm(project(basis32, member) - member) <= 1e-12


def test_disk_kernel_converges_with_order():
    errs = [disk_kernel_error(48, N, radius=0.8) for N in (4, 8, 16)]
    assert errs[0] > errs[1] > errs[2]


def test_b_zero_reduction(basis32, disk32):
    assert b_zero_reduction_check(basis32) <= 1e-12
    g = build_grid(Domain.disk(), 20)
    a = GridFunction.constant(g, Bicomplex(0.4, 0.2j))
    Ba = gram_schmidt(make_solution_set(Coefficients(a, GridFunction.constant(g, 0.0)), 4))
    assert b_zero_reduction_check(Ba) <= 5e-2
    Bb = gram_schmidt(make_solution_set(Coefficients.constant(g, b=0.2), 2))
    with pytest.raises(WrongCoefficients):
        b_zero_reduction_check(Bb)
    with pytest.raises(WrongCoefficients):
        b_zero_reduction_check(gram_schmidt([GridFunction.constant(disk32, 1.0)]))


def test_kernel_matrix_blocks(basis32):
    idx = np.array([1, 2, 3])
    B = kernel_matrices(basis32, idx, idx)
    assert set(B) == {"K_sc", "K_vec", "L_sc", "L_vec"}
    assert all(v.shape == (3, 3) for v in B.values())
