"""Basic carriers: matrix validation, the standard symplectic form, clustering
of a symplectic spectrum into index sets, and matrix norms.

Matrices are plain ``numpy.ndarray`` objects of dtype float64. Index sets
are tuples of 1-based positions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

IndexSet = tuple[int, ...]


def as_matrix(M, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a finite 2-D float64 array, raising DomainError otherwise."""
    arr = np.asarray(M, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 0:
        raise DomainError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DomainError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def half_dim(M: np.ndarray, name: str = "matrix") -> int:
    """Half of the (even) row count of ``M``."""
    rows = M.shape[0]
    if rows % 2:
        raise DomainError(f"{name} must have an even number of rows, got {rows}")
    return rows // 2


def symplectic_form(n: int) -> np.ndarray:
    """The standard form ``J_2n = [[0, I], [-I, 0]]``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


def to_zero_based(indices: IndexSet) -> np.ndarray:
    return np.asarray(indices, dtype=int) - 1


@dataclass(frozen=True)
class ClusterStructure:
    """Distinct symplectic eigenvalues ``mus`` and their index sets.

    ``alphas[i]`` holds the positions (1-based) of the spectrum equal to
    ``mus[i]``; ``betas[i]`` is ``alphas[i]`` shifted by ``n`` and
    ``gammas[i]`` is their union.
    """

    n: int
    mus: tuple[float, ...]
    alphas: tuple[IndexSet, ...]
    betas: tuple[IndexSet, ...]
    gammas: tuple[IndexSet, ...]
    tolerance: float

    @property
    def r(self) -> int:
        return len(self.mus)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.alphas)

    def to_dict(self) -> list[dict]:
        return [
            {"mu": mu, "alpha": list(a), "beta": list(b), "gamma": list(g)}
            for mu, a, b, g in zip(self.mus, self.alphas, self.betas, self.gammas)
        ]


def build_clusters(spectrum, rel_tol: float = 1e-8) -> ClusterStructure:
    """Group an ascending positive spectrum into clusters of (numerically) equal values.

    Consecutive entries ``d <= d'`` fall in the same cluster when
    ``d' - d <= rel_tol * max(d, 1)`` (single linkage on gaps). Each cluster
    is represented by the mean of its members.
    """
    d = np.asarray(spectrum, dtype=float).ravel()
    if d.size == 0:
        raise DomainError("spectrum must be non-empty")
    if not np.all(np.isfinite(d)) or np.any(d <= 0):
        raise DomainError("spectrum entries must be finite and positive")
    if np.any(np.diff(d) < 0):
        raise DomainError("spectrum must be sorted ascending")
    if rel_tol < 0:
        raise DomainError("rel_tol must be non-negative")

    n = d.size
    groups: list[list[int]] = [[0]]
    for j in range(1, n):
        if d[j] - d[j - 1] <= rel_tol * max(d[j - 1], 1.0):
            groups[-1].append(j)
        else:
            groups.append([j])

    mus = tuple(float(np.mean(d[g])) for g in groups)
    alphas = tuple(tuple(j + 1 for j in g) for g in groups)
    betas = tuple(tuple(j + n for j in a) for a in alphas)
    gammas = tuple(a + b for a, b in zip(alphas, betas))
    return ClusterStructure(n, mus, alphas, betas, gammas, float(rel_tol))


def spectral_norm(M) -> float:
    """Largest singular value, via the Jacobi eigensolver applied to ``M^T M``."""
    from .numerics import sym_eigen

    M = as_matrix(M)
    if M.size == 0 or not np.any(M):
        return 0.0
    # scaling keeps M^T M away from underflow/overflow
    scale = np.max(np.abs(M))
    Ms = M / scale
    gram = Ms.T @ Ms if M.shape[1] <= M.shape[0] else Ms @ Ms.T
    gram = 0.5 * (gram + gram.T)
    lam = sym_eigen(gram).eigenvalues[-1]
    return float(scale * np.sqrt(max(lam, 0.0)))


def frobenius_norm(M) -> float:
    M = as_matrix(M)
    return float(np.sqrt(np.sum(M * M)))
