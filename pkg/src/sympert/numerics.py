"""Dense kernels: cyclic Jacobi eigensolver, positive definite powers,
seeded random unitaries, and log-log slope fitting."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import as_matrix
from .errors import DegenerateInputError, DomainError, InsufficientDataError, NotPositiveDefiniteError, NumericError

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
DEFAULT_DROP_BELOW = 1e-13


@dataclass(frozen=True)
class SymmetricEigen:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns aligned with eigenvalues


@dataclass(frozen=True)
class ComplexPair:
    """A complex matrix ``re + i*im`` held as two real arrays."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        if np.shape(self.re) != np.shape(self.im):
            raise DomainError("real and imaginary parts must have the same shape")

    @classmethod
    def from_complex(cls, Z: np.ndarray) -> "ComplexPair":
        return cls(np.ascontiguousarray(Z.real), np.ascontiguousarray(Z.imag))

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im


def _off_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.sqrt(np.sum(off * off)))


def sym_eigen(A, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> SymmetricEigen:
    """Eigendecomposition of a real symmetric matrix by row-cyclic Jacobi rotations.

    Sweeps continue until the off-diagonal Frobenius mass drops to
    ``tol * ||A||_F``. Eigenvalues are returned ascending with matching
    eigenvector columns.
    """
    A = as_matrix(A, square=True)
    scale = float(np.sqrt(np.sum(A * A)))
    if float(np.sqrt(np.sum((A - A.T) ** 2))) > 1e-10 * scale:
        raise DomainError("sym_eigen requires a symmetric matrix")
    m = A.shape[0]
    a = 0.5 * (A + A.T)
    Vt = np.eye(m)  # transposed eigenvector matrix; rows are rotated
    target = tol * scale

    for sweep in range(max_sweeps + 1):
        if _off_norm(a) <= target:
            break
        if sweep == max_sweeps:
            raise NumericError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = float(a[p, q])
                if apq == 0.0:
                    continue
                app, aqq = float(a[p, p]), float(a[q, q])
                # too small to move either diagonal entry
                if abs(apq) <= 1e-18 * math.sqrt(abs(app * aqq)):
                    a[p, q] = a[q, p] = 0.0
                    continue
                diff = aqq - app
                if abs(apq) < 1e-150 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # rotate rows p, q and mirror into the columns (a stays symmetric)
                rp, rq = a[p].copy(), a[q].copy()
                a[p] = c * rp - s * rq
                a[q] = s * rp + c * rq
                a[:, p] = a[p]
                a[:, q] = a[q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                vp, vq = Vt[p].copy(), Vt[q].copy()
                Vt[p] = c * vp - s * vq
                Vt[q] = s * vp + c * vq

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return SymmetricEigen(w[order], Vt.T[:, order].copy())


_ALLOWED_POWERS = (0.5, -0.5, -1.0)


def pd_power(A, p: float) -> np.ndarray:
    """``A**p`` for symmetric positive definite ``A`` and ``p`` in {1/2, -1/2, -1}."""
    if float(p) not in _ALLOWED_POWERS:
        raise DomainError(f"power must be one of {_ALLOWED_POWERS}, got {p}")
    eig = sym_eigen(A)
    lam, V = eig.eigenvalues, eig.eigenvectors
    if lam[0] <= 0:
        raise NotPositiveDefiniteError(f"matrix is not positive definite (min eigenvalue {lam[0]:.3e})")
    P = (V * lam**p) @ V.T
    return 0.5 * (P + P.T)


def complex_gram_schmidt(Z: np.ndarray, min_norm: float = 1e-12) -> np.ndarray:
    """Orthonormalize the columns of complex ``Z`` in index order.

    Classical Gram-Schmidt with one re-orthogonalization pass per column.
    Raises DegenerateInputError if a column's norm after projection falls
    below ``min_norm``.
    """
    Z = np.asarray(Z, dtype=complex)
    m, k = Z.shape
    W = np.zeros((m, k), dtype=complex)
    for j in range(k):
        z = Z[:, j].copy()
        for _ in range(2):
            z -= W[:, :j] @ (W[:, :j].conj().T @ z)
        nrm = np.linalg.norm(z)
        if nrm < min_norm:
            raise DegenerateInputError(f"column {j + 1} is numerically dependent on its predecessors (norm {nrm:.2e})")
        W[:, j] = z / nrm
    return W


def random_unitary(n: int, seed: int) -> ComplexPair:
    """Seeded ``n x n`` unitary from Gram-Schmidt of a complex Gaussian sample.

    The triangular factor implied by Gram-Schmidt has a positive real
    diagonal, so the result is a deterministic function of ``seed``.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return ComplexPair.from_complex(complex_gram_schmidt(Z))


def fit_loglog_slope(ts, ys, drop_below: float = DEFAULT_DROP_BELOW) -> tuple[float, float]:
    """Least-squares line through ``(log t, log y)``.

    Points with ``y <= drop_below`` are discarded first; at least three must
    remain.
    """
    ts = np.asarray(ts, dtype=float).ravel()
    ys = np.asarray(ys, dtype=float).ravel()
    if ts.shape != ys.shape:
        raise DomainError("ts and ys must have equal length")
    keep = np.isfinite(ys) & (ys > drop_below) & (ts > 0)
    if np.count_nonzero(keep) < 3:
        raise InsufficientDataError(f"only {np.count_nonzero(keep)} points above {drop_below:g}; need 3")
    x, y = np.log(ts[keep]), np.log(ys[keep])
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(intercept)
