import numpy as np
import pytest

from sympert import (
    DomainError,
    InstanceSpec,
    IsotropicRangeError,
    align_orthosymplectic,
    build_clusters,
    esr,
    is_orthosymplectic,
    is_symplectic,
    make_instance,
    nearest_diagonalizer,
    perturbation_report,
    random_symmetric,
    scaling_study,
    spectral_norm,
    symplectic_correction,
    williamson_decompose,
)
from sympert.blockops import symplectic_diagonal_block
from sympert.williamson import symplectic_inverse

from conftest import random_block_orthosymplectic


@pytest.fixture
def instance():
    spectrum = (1.0, 1.0, 2.0)
    A, S = make_instance(InstanceSpec(3, spectrum, 3, 4.0))
    return A, S, build_clusters(spectrum)


def perturbed(A, t, seed=0):
    H = t * random_symmetric(A.shape[0], seed)
    return H, williamson_decompose(A + H).S


def test_report_zero_perturbation(instance):
    A, S, cl = instance
    rep = perturbation_report(A, np.zeros_like(A), S, S, cl)
    assert set(rep.offdiag) == {(1, 2), (2, 1)}
    assert max(rep.offdiag.values()) <= 1e-12
    assert max(rep.ortho_defect.values()) <= 1e-12
    assert max(rep.sympl_defect.values()) <= 1e-12
    assert rep.h_norm == 0.0


@pytest.mark.parametrize("seed", range(3))
def test_report_block_orthosymplectic_freedom(instance, seed):
    A, S, cl = instance
    Q = random_block_orthosymplectic(cl.sizes, seed)
    rep = perturbation_report(A, np.zeros_like(A), S, S @ Q, cl)
    for family in (rep.offdiag, rep.ortho_defect, rep.sym_defect, rep.antisym_defect, rep.sympl_defect):
        assert max(family.values()) <= 1e-10


def test_report_rejects_nonsymplectic(instance):
    A, S, cl = instance
    with pytest.raises(DomainError):
        perturbation_report(A, np.zeros_like(A), S, 2 * S, cl)


def test_offdiag_invariant_under_block_rotations(instance):
    A, S, cl = instance
    H, St = perturbed(A, 1e-3)
    base = perturbation_report(A, H, S, St, cl)
    Q0 = random_block_orthosymplectic(cl.sizes, 7)
    Q1 = random_block_orthosymplectic(cl.sizes, 8)
    moved = perturbation_report(A, H, S @ Q0, St @ Q1, cl)
    for key, val in base.offdiag.items():
        assert moved.offdiag[key] == pytest.approx(val, abs=1e-10)


def test_align_identity(instance):
    A, S, cl = instance
    al = align_orthosymplectic(S, S, cl)
    assert np.allclose(al.Q, np.eye(6), atol=1e-14)
    assert al.residual <= 1e-13


@pytest.mark.parametrize("seed", range(5))
def test_align_single_cluster_recovers_orthosymplectic(seed):
    G = random_block_orthosymplectic((3,), seed)
    cl = build_clusters([1.0, 1.0, 1.0])
    al = align_orthosymplectic(np.eye(6), G, cl)
    assert np.allclose(al.Q, G, atol=1e-12)
    assert al.residual <= 1e-10


@pytest.mark.parametrize("t", [1e-5, 1e-3, 1e-1])
def test_align_structure(instance, t):
    A, S, cl = instance
    _, St = perturbed(A, t)
    al = align_orthosymplectic(S, St, cl)
    assert is_orthosymplectic(al.Q, 1e-9 * 3)
    for blk in al.blocks:
        assert is_orthosymplectic(blk, 1e-9 * 3)
    assert not np.any(al.Q[np.ix_([0, 1, 3, 4], [2, 5])])
    assert not np.any(al.Q[np.ix_([2, 5], [0, 1, 3, 4])])
    assert np.array_equal(symplectic_diagonal_block(al.Q, (1, 2)), al.blocks[0])


def test_nearest_diagonalizer_fixed_points(instance):
    A, S, cl = instance
    assert np.allclose(nearest_diagonalizer(S, S, cl, A), S, atol=1e-13)
    Q0 = random_block_orthosymplectic(cl.sizes, 1)
    assert np.allclose(nearest_diagonalizer(S, S @ Q0, cl, A), S @ Q0, atol=1e-12)


def test_nearest_diagonalizer_diagonalizes(instance):
    A, S, cl = instance
    _, St = perturbed(A, 1e-4)
    Sn = nearest_diagonalizer(S, St, cl, A)
    dd = np.diag([1.0, 1.0, 2.0, 1.0, 1.0, 2.0])
    assert spectral_norm(Sn.T @ A @ Sn - dd) <= 1e-8 * spectral_norm(A)
    assert spectral_norm(St - Sn) == pytest.approx(align_orthosymplectic(S, St, cl).residual, rel=1e-12)


def test_nearest_diagonalizer_checks_M(instance):
    A, S, cl = instance
    with pytest.raises(DomainError):
        nearest_diagonalizer(np.eye(6), S, cl, A)


def test_esr_examples():
    e = np.eye(4)
    S, R = esr(np.column_stack([e[:, 0], 2 * e[:, 2]]))
    assert np.array_equal(R, np.diag([1.0, 2.0]))
    assert np.array_equal(S, e[:, [0, 2]])
    W = e[:, [0, 2]]
    S, R = esr(W)
    assert np.array_equal(R, np.eye(2)) and np.array_equal(S, W)
    with pytest.raises(IsotropicRangeError):
        esr(e[:, [0, 1]])


@pytest.mark.parametrize("seed", range(5))
def test_esr_random(seed):
    W = np.random.default_rng(seed).standard_normal((6, 2))
    S, R = esr(W)
    assert is_symplectic(S, 1e-10)
    assert np.allclose(S @ R, W, atol=1e-13)


def test_correction_identity(instance):
    A, S, cl = instance
    corr = symplectic_correction(S, S, cl)
    for N in corr.N:
        assert np.allclose(N, np.eye(N.shape[0]), atol=1e-13)
    assert max(corr.residuals.values()) <= 1e-13


def test_correction_of_symplectic_blocks(instance):
    A, S, cl = instance
    Q = random_block_orthosymplectic(cl.sizes, 4)
    corr = symplectic_correction(S, S @ Q, cl)
    C = symplectic_inverse(S) @ S @ Q
    for i, N in enumerate(corr.N):
        assert np.allclose(N, symplectic_diagonal_block(C, cl.alphas[i]), atol=1e-10)


@pytest.mark.parametrize("t", [1e-5, 1e-2, 1e-1])
def test_correction_structure_and_ordering(instance, t):
    A, S, cl = instance
    _, St = perturbed(A, t)
    corr = symplectic_correction(S, St, cl)
    for N in corr.N:
        assert is_symplectic(N, 1e-9 * 3)
    if t < 1e-3:
        assert max(corr.residuals.values()) <= align_orthosymplectic(S, St, cl).residual


def test_scaling_study_zero_perturbation():
    st = scaling_study((1.0, 1.0, 2.0), 1, np.logspace(-10, -8, 4), H=np.zeros((6, 6)))
    assert st.slopes["offdiag_max"] is None
    assert st.slopes["align_residual"] is None
    assert all(len(c) == 4 for c in st.curves.values())


def test_scaling_study_drops_indefinite_points():
    with pytest.warns(RuntimeWarning):
        st = scaling_study((1.0, 2.0), 2, [1e-4, 1e-3, 1e-2, 1e3], H=-np.eye(4))
    assert st.dropped == [1e3]
    assert len(st.ts) == 3


def test_scaling_study_threads_match_serial():
    ts = np.logspace(-5, -2, 4)
    a = scaling_study((1.0, 1.0, 2.0), 7, ts, workers=1)
    b = scaling_study((1.0, 1.0, 2.0), 7, ts, workers=4)
    assert a.curves == b.curves


@pytest.mark.parametrize("spectrum", [(1.0, 1.0, 2.0), (1.0, 2.0, 3.0)])
def test_scaling_study_slopes(spectrum):
    st = scaling_study(spectrum, 7, np.logspace(-6, -2, 9))
    assert 0.85 <= st.slopes["align_residual"] <= 1.15
    assert 0.85 <= st.slopes["spectrum_drift"] <= 1.15
    assert 1.8 <= st.slopes["sympl_defect_max"] <= 2.2
    assert 1.8 <= st.slopes["correction_residual_max"] <= 2.2
