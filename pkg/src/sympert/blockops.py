"""Block operations that respect the ``(q, p)`` half-split of ``2m x 2m``
matrices: symplectic blocks, symplectic direct sums, symplectic
concatenation, symplecticity predicates and the unitary parametrization of
orthosymplectic matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .core import IndexSet, as_matrix, half_dim, spectral_norm, symplectic_form, to_zero_based
from .errors import DomainError
from .numerics import ComplexPair


def default_tol(dim: int) -> float:
    return 1e-8 * max(dim, 1)


@dataclass(frozen=True)
class SymplecticBlockSpec:
    row_set: IndexSet
    col_set: IndexSet
    ambient_half_dim: int

    def __post_init__(self):
        for name, s in (("row_set", self.row_set), ("col_set", self.col_set)):
            if any(b <= a for a, b in zip(s, s[1:])):
                raise DomainError(f"{name} must be strictly increasing")
            if s and (s[0] < 1 or s[-1] > self.ambient_half_dim):
                raise DomainError(f"{name} {s} outside 1..{self.ambient_half_dim}")


def symplectic_block(T, spec: SymplecticBlockSpec) -> np.ndarray:
    """The submatrix ``[[W_IJ, X_IJ], [Y_IJ, Z_IJ]]`` of ``T = [[W, X], [Y, Z]]``."""
    T = as_matrix(T, square=True, name="T")
    m = half_dim(T, "T")
    if m != spec.ambient_half_dim:
        raise DomainError(f"T has half-dimension {m}, spec expects {spec.ambient_half_dim}")
    I = to_zero_based(spec.row_set)
    J = to_zero_based(spec.col_set)
    rows = np.concatenate([I, I + m])
    cols = np.concatenate([J, J + m])
    return T[np.ix_(rows, cols)].copy()


def symplectic_diagonal_block(T, index_set: IndexSet) -> np.ndarray:
    T = as_matrix(T, square=True, name="T")
    return symplectic_block(T, SymplecticBlockSpec(tuple(index_set), tuple(index_set), half_dim(T, "T")))


def symplectic_direct_sum(*mats) -> np.ndarray:
    """``T ⊕s T' ⊕s ...``: blockwise direct sum of the four half-blocks."""
    if not mats:
        raise DomainError("need at least one matrix")
    mats = [as_matrix(T, square=True) for T in mats]
    halves = [half_dim(T) for T in mats]
    m = sum(halves)
    out = np.zeros((2 * m, 2 * m))
    off = 0
    for T, k in zip(mats, halves):
        sl, sh = slice(off, off + k), slice(m + off, m + off + k)
        out[sl, sl] = T[:k, :k]
        out[sl, sh] = T[:k, k:]
        out[sh, sl] = T[k:, :k]
        out[sh, sh] = T[k:, k:]
        off += k
    return out


def _split_columns(M: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
    cols = M.shape[1]
    if cols % 2:
        raise DomainError(f"{name} must have an even number of columns, got {cols}")
    k = cols // 2
    return M[:, :k], M[:, k:]


def symplectic_concat(M, N) -> np.ndarray:
    """``M ⋄ N``: columns ordered ``(p_1..p_k, x_1..x_l, q_1..q_k, y_1..y_l)``."""
    M = as_matrix(M, name="M")
    N = as_matrix(N, name="N")
    if M.shape[0] != N.shape[0]:
        raise DomainError(f"row counts differ: {M.shape[0]} vs {N.shape[0]}")
    P, Q = _split_columns(M, "M")
    X, Y = _split_columns(N, "N")
    return np.hstack([P, X, Q, Y])


def symplectic_unconcat(C, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of ``symplectic_concat`` when the left factor has ``2k`` columns."""
    C = as_matrix(C)
    L = C.shape[1] // 2
    if C.shape[1] % 2 or not 0 <= k <= L:
        raise DomainError("bad split")
    M = np.hstack([C[:, :k], C[:, L : L + k]])
    N = np.hstack([C[:, k:L], C[:, L + k :]])
    return M, N


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    residuals: dict[str, float]

    def __bool__(self) -> bool:
        return self.passed


def symplectic_residual(M) -> float:
    """``||M^T J_2n M - J_2k||`` for a ``2n x 2k`` frame ``M``."""
    M = as_matrix(M)
    n = half_dim(M)
    k = M.shape[1] // 2
    if M.shape[1] % 2:
        raise DomainError("M must have an even number of columns")
    return spectral_norm(M.T @ symplectic_form(n) @ M - symplectic_form(k))


def is_symplectic(M, tol: float | None = None) -> CheckResult:
    M = as_matrix(M)
    res = symplectic_residual(M)
    tol = default_tol(M.shape[0]) if tol is None else tol
    return CheckResult(res <= tol, {"symplectic": res})


def is_orthosymplectic(Q, tol: float | None = None) -> CheckResult:
    Q = as_matrix(Q, square=True)
    half_dim(Q)
    tol = default_tol(Q.shape[0]) if tol is None else tol
    ortho = spectral_norm(Q.T @ Q - np.eye(Q.shape[0]))
    sympl = symplectic_residual(Q)
    return CheckResult(ortho <= tol and sympl <= tol, {"orthogonal": ortho, "symplectic": sympl})


def unitarity_residual(U: ComplexPair) -> float:
    X, Y = np.asarray(U.re, dtype=float), np.asarray(U.im, dtype=float)
    n = X.shape[0]
    # (X + iY)^*(X + iY) = (X^T X + Y^T Y) + i (X^T Y - Y^T X)
    return max(
        spectral_norm(X.T @ X + Y.T @ Y - np.eye(n)),
        spectral_norm(X.T @ Y - Y.T @ X),
    )


def orthosymplectic_from_unitary(U: ComplexPair, tol: float = 1e-10) -> np.ndarray:
    """``[[X, Y], [-Y, X]]`` for a unitary ``X + iY``."""
    X = as_matrix(U.re, square=True, name="X")
    Y = as_matrix(U.im, square=True, name="Y")
    if X.shape != Y.shape:
        raise DomainError("X and Y must have the same shape")
    res = unitarity_residual(ComplexPair(X, Y))
    if res > tol:
        raise DomainError(f"X + iY is not unitary (residual {res:.2e})")
    return np.block([[X, Y], [-Y, X]])


def unitary_from_orthosymplectic(Q) -> ComplexPair:
    """Read ``X + iY`` back from ``[[X, Y], [-Y, X]]`` (no structure check)."""
    Q = as_matrix(Q, square=True)
    n = half_dim(Q)
    return ComplexPair(Q[:n, :n].copy(), Q[:n, n:].copy())


def concat_compatibility(M, N) -> float:
    """``||M^T J_2n N||``; ``M ⋄ N`` is symplectic exactly when this vanishes."""
    M = as_matrix(M, name="M")
    N = as_matrix(N, name="N")
    if M.shape[0] != N.shape[0]:
        raise DomainError(f"row counts differ: {M.shape[0]} vs {N.shape[0]}")
    n = half_dim(M, "M")
    _split_columns(M, "M")
    _split_columns(N, "N")
    if M.shape[1] == 0 or N.shape[1] == 0:
        return 0.0
    return spectral_norm(M.T @ symplectic_form(n) @ N)


def concat_all(frames) -> np.ndarray:
    return reduce(symplectic_concat, frames)
