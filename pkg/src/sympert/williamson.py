"""Williamson normal form ``S^T A S = D ⊕ D`` of a positive definite matrix,
an independent route to the symplectic spectrum, and seeded generators of
test instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blockops import orthosymplectic_from_unitary, symplectic_residual
from .core import ClusterStructure, as_matrix, build_clusters, frobenius_norm, half_dim, spectral_norm, symplectic_form
from .errors import DomainError, NotPositiveDefiniteError, NumericError
from .numerics import random_unitary, sym_eigen

MAX_CONDITION = 1e12
# relative gap (w.r.t. the largest eigenvalue of -K^2) below which eigenvalues
# are paired inside one invariant subspace
_PAIRING_TOL = 1e-8


@dataclass(frozen=True)
class WilliamsonResult:
    S: np.ndarray
    D: np.ndarray
    clusters: ClusterStructure
    residual_diag: float
    residual_sympl: float

    def to_dict(self) -> dict:
        return {
            "D": self.D.tolist(),
            "S": self.S.tolist(),
            "residual_diag": self.residual_diag,
            "residual_sympl": self.residual_sympl,
            "clusters": [{"mu": c["mu"], "alpha": c["alpha"]} for c in self.clusters.to_dict()],
        }


def _check_pd(A: np.ndarray):
    if frobenius_norm(A - A.T) > 1e-10 * frobenius_norm(A):
        raise DomainError("matrix is not symmetric")
    eig = sym_eigen(A)
    lam = eig.eigenvalues
    if lam[0] <= 0:
        raise NotPositiveDefiniteError(f"matrix is not positive definite (min eigenvalue {lam[0]:.3e})")
    return eig


def _pair_groups(omega: np.ndarray) -> list[np.ndarray]:
    groups = [[0]]
    tol = _PAIRING_TOL * omega[-1]
    for k in range(1, omega.size):
        if omega[k] - omega[k - 1] <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    return [np.array(g) for g in groups]


def _orth_against(x: np.ndarray, F: list[np.ndarray]) -> np.ndarray:
    if not F:
        return x
    B = np.column_stack(F)
    for _ in range(2):
        x = x - B @ (B.T @ x)
    return x


def williamson_decompose(A, cluster_tol: float = 1e-8) -> WilliamsonResult:
    """Symplectic ``S`` with ``S^T A S = D ⊕ D``, ``D`` ascending.

    Built as ``S = A^{-1/2} O (Δ^{1/2} ⊕ Δ^{1/2})`` where the orthogonal ``O``
    brings the skew matrix ``K = A^{-1/2} J A^{-1/2}`` to the canonical form
    ``[[0, Δ^{-1}], [-Δ^{-1}, 0]]``. Inside each eigenspace of ``-K^2`` the
    columns of ``O`` are formed as canonical pairs ``(u, -d K u)``.
    """
    A = as_matrix(A, square=True, name="A")
    n = half_dim(A, "A")
    eig = _check_pd(A)
    lam, V = eig.eigenvalues, eig.eigenvectors
    if lam[-1] / lam[0] > MAX_CONDITION:
        raise NumericError(f"condition number {lam[-1] / lam[0]:.2e} exceeds {MAX_CONDITION:.0e}")

    R = (V * lam**-0.5) @ V.T
    R = 0.5 * (R + R.T)
    K = R @ symplectic_form(n) @ R
    K = 0.5 * (K - K.T)
    Ms = K.T @ K
    Ms = 0.5 * (Ms + Ms.T)
    meig = sym_eigen(Ms)
    omega, E = meig.eigenvalues, meig.eigenvectors
    if omega[0] <= 0:
        raise NumericError("skew form lost rank; cannot pair eigenvectors")

    frame: list[np.ndarray] = []
    pairs: list[tuple[float, np.ndarray, np.ndarray]] = []
    for gi, g in enumerate(_pair_groups(omega)):
        if g.size % 2:
            raise NumericError(f"eigenspace {gi + 1} of -K^2 has odd dimension {g.size}; pairing failed")
        basis = E[:, g]
        for _ in range(g.size // 2):
            P = np.column_stack([_orth_against(basis[:, c], frame) for c in range(basis.shape[1])])
            norms = np.linalg.norm(P, axis=0)
            c = int(np.argmax(norms))
            if norms[c] < 1e-6:
                raise NumericError(f"rank defect while pairing eigenspace {gi + 1}")
            u = P[:, c] / norms[c]
            w = float(u @ Ms @ u)
            d = 1.0 / np.sqrt(w)
            v = _orth_against(-d * (K @ u), frame + [u])
            v /= np.linalg.norm(v)
            frame += [u, v]
            pairs.append((d, u, v))

    pairs.sort(key=lambda p: p[0])
    D = np.array([p[0] for p in pairs])
    O = np.column_stack([p[1] for p in pairs] + [p[2] for p in pairs])
    root = np.sqrt(np.concatenate([D, D]))
    S = (R @ O) * root

    residual_diag = spectral_norm(S.T @ A @ S - np.diag(np.concatenate([D, D])))
    residual_sympl = symplectic_residual(S)
    return WilliamsonResult(S, D, build_clusters(D, cluster_tol), residual_diag, residual_sympl)


def symplectic_spectrum_oracle(A) -> np.ndarray:
    """Symplectic eigenvalues from the spectrum of ``K^T K``, ``K = A^{1/2} J A^{1/2}``.

    Never builds a diagonalizing matrix; each ``d_j^2`` shows up twice and
    adjacent pairs are averaged.
    """
    A = as_matrix(A, square=True, name="A")
    n = half_dim(A, "A")
    eig = _check_pd(A)
    lam, V = eig.eigenvalues, eig.eigenvectors
    M = (V * np.sqrt(lam)) @ V.T
    M = 0.5 * (M + M.T)
    K = M @ symplectic_form(n) @ M
    G = K.T @ K
    lam = sym_eigen(0.5 * (G + G.T)).eigenvalues
    return np.sqrt(0.5 * (lam[0::2] + lam[1::2]))


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    spectrum: tuple[float, ...]
    seed: int = 0
    conditioning: float = 4.0

    def __post_init__(self):
        if self.n < 1 or len(self.spectrum) != self.n:
            raise DomainError("spectrum must have n entries")
        if any(d <= 0 for d in self.spectrum):
            raise DomainError("spectrum must be positive")
        if self.conditioning < 1:
            raise DomainError("conditioning must be >= 1")


def random_symplectic(n: int, seed: int, conditioning: float = 4.0) -> np.ndarray:
    """``K1 (Λ ⊕ Λ^{-1}) K2`` with random orthosymplectic ``K1, K2`` and
    ``Λ`` log-uniform in ``[1, conditioning]``."""
    if conditioning < 1:
        raise DomainError("conditioning must be >= 1")
    rng = np.random.default_rng(seed)
    s1, s2 = (int(x) for x in rng.integers(0, 2**63 - 1, size=2))
    K1 = orthosymplectic_from_unitary(random_unitary(n, s1))
    K2 = orthosymplectic_from_unitary(random_unitary(n, s2))
    lam = np.exp(rng.uniform(0.0, np.log(conditioning), size=n))
    return (K1 * np.concatenate([lam, 1.0 / lam])) @ K2


def symplectic_inverse(S) -> np.ndarray:
    """``S^{-1} = -J S^T J`` for symplectic ``S``."""
    S = as_matrix(S, square=True)
    J = symplectic_form(half_dim(S))
    return -J @ S.T @ J


def make_instance(spec: InstanceSpec) -> tuple[np.ndarray, np.ndarray]:
    """Positive definite ``A`` together with a known ``S_true`` in ``Sp(2n; A)``."""
    G = random_symplectic(spec.n, spec.seed, spec.conditioning)
    Gi = symplectic_inverse(G)
    dd = np.concatenate([spec.spectrum, spec.spectrum]).astype(float)
    A = (Gi.T * dd) @ Gi
    return 0.5 * (A + A.T), G


def random_symmetric(dim: int, seed: int) -> np.ndarray:
    """Gaussian symmetric matrix normalized to unit spectral norm."""
    if dim < 1:
        raise DomainError("dim must be at least 1")
    B = np.random.default_rng(seed).standard_normal((dim, dim))
    H = 0.5 * (B + B.T)
    return H / spectral_norm(H)
