import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sympert import DomainError, build_clusters, frobenius_norm, spectral_norm, symplectic_form


def test_clusters_worked_example():
    c = build_clusters([1, 1, 2, 3, 3, 3, 4, 4, 4, 5], 1e-8)
    assert c.r == 5
    assert c.mus == (1, 2, 3, 4, 5)
    assert c.alphas == ((1, 2), (3,), (4, 5, 6), (7, 8, 9), (10,))
    assert c.betas == ((11, 12), (13,), (14, 15, 16), (17, 18, 19), (20,))
    assert c.gammas == ((1, 2, 11, 12), (3, 13), (4, 5, 6, 14, 15, 16), (7, 8, 9, 17, 18, 19), (10, 20))


def test_single_eigenvalue():
    c = build_clusters([1.0], 0.3)
    assert c.alphas == ((1,),) and c.betas == ((2,),) and c.gammas == ((1, 2),)


def test_near_equal_values_merge():
    c = build_clusters([1, 1 + 1e-12, 5], 1e-8)
    assert c.alphas == ((1, 2), (3,))
    assert c.mus[0] == pytest.approx(1 + 0.5e-12, abs=1e-15)


@pytest.mark.parametrize("bad", [[2, 1], [0, 1], [-1.0], [], [1, float("nan")]])
def test_bad_spectrum(bad):
    with pytest.raises(DomainError):
        build_clusters(bad)


spectra = st.lists(st.sampled_from([0.5, 1.0, 1.5, 2.0, 7.0]), min_size=1, max_size=12).map(sorted)


@given(spectra)
def test_cluster_partition(spectrum):
    c = build_clusters(spectrum)
    n = len(spectrum)
    flat = [j for a in c.alphas for j in a]
    assert flat == list(range(1, n + 1))
    assert list(c.mus) == sorted(set(spectrum))
    for a, b, g in zip(c.alphas, c.betas, c.gammas):
        assert b == tuple(j + n for j in a)
        assert len(g) == 2 * len(a) and set(g) == set(a) | set(b)


@pytest.mark.parametrize(
    "M, expected",
    [
        (np.eye(4), 1.0),
        (np.diag([3.0, -7.0]), 7.0),
        (np.array([[0.0, 2.0], [0.0, 0.0]]), 2.0),
        (np.zeros((3, 2)), 0.0),
    ],
)
def test_spectral_norm(M, expected):
    assert spectral_norm(M) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize(
    "M, expected",
    [(np.zeros((2, 2)), 0.0), (np.eye(3), math.sqrt(3)), (np.array([[1.0, 2.0], [3.0, 4.0]]), math.sqrt(30))],
)
def test_frobenius_norm(M, expected):
    assert frobenius_norm(M) == pytest.approx(expected, rel=1e-15)


@settings(max_examples=50)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_norm_sandwich(rows, cols, seed):
    M = np.random.default_rng(seed).standard_normal((rows, cols))
    s, f = spectral_norm(M), frobenius_norm(M)
    assert s == pytest.approx(np.linalg.norm(M, 2), rel=1e-10)
    assert s <= f * (1 + 1e-12)
    assert f <= math.sqrt(np.linalg.matrix_rank(M)) * s * (1 + 1e-12)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_symplectic_form(n):
    J = symplectic_form(n)
    I = np.eye(2 * n)
    assert np.array_equal(J.T, -J)
    assert np.array_equal(J @ J, -I)
    assert np.array_equal(J.T @ J, I)
    assert np.array_equal(J.T @ J @ J, J)
