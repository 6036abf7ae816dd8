"""Block perturbation diagnostics for Williamson diagonalizers.

Given ``S`` diagonalizing ``A`` and ``S_tilde`` diagonalizing ``A + H``,
everything here works on ``C = S^{-1} S_tilde`` split along the clusters of
the symplectic spectrum of ``A``:

* ``perturbation_report``: norms of the cluster blocks of ``C`` that vanish
  to first (or second) order in ``||H||``;
* ``align_orthosymplectic``: a cluster-block-diagonal orthosymplectic ``Q``
  with ``S_tilde ≈ S Q``;
* ``nearest_diagonalizer``: ``M Q``, a diagonalizer of ``A`` close to ``S_tilde``;
* ``symplectic_correction``: per cluster, a symplectic ``N`` within
  ``O(||H||^2)`` of the diagonal block of ``C``, built by repeated
  elementary SR steps;
* ``scaling_study``: sweeps ``A + tH`` and fits log-log slopes of all of
  the above.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .blockops import (
    SymplecticBlockSpec,
    default_tol,
    is_orthosymplectic,
    is_symplectic,
    symplectic_block,
    symplectic_concat,
    symplectic_residual,
)
from .core import ClusterStructure, as_matrix, half_dim, spectral_norm, symplectic_form, to_zero_based
from .errors import DomainError, InsufficientDataError, IsotropicRangeError
from .numerics import DEFAULT_DROP_BELOW, complex_gram_schmidt, fit_loglog_slope, sym_eigen
from .williamson import InstanceSpec, make_instance, random_symmetric, symplectic_inverse, williamson_decompose


ISO_TOL = 1e-12

METRICS = (
    "offdiag_max",
    "sym_defect_max",
    "antisym_defect_max",
    "ortho_defect_max",
    "sympl_defect_max",
    "align_residual",
    "correction_residual_max",
    "spectrum_drift",
)


@dataclass(frozen=True)
class PerturbationReport:
    offdiag: dict[tuple[int, int], float]
    sym_defect: dict[int, float]
    antisym_defect: dict[int, float]
    ortho_defect: dict[int, float]
    sympl_defect: dict[int, float]
    h_norm: float

    def to_dict(self) -> dict:
        return {
            "offdiag": {f"{i},{j}": v for (i, j), v in self.offdiag.items()},
            "sym_defect": {str(i): v for i, v in self.sym_defect.items()},
            "antisym_defect": {str(i): v for i, v in self.antisym_defect.items()},
            "ortho_defect": {str(i): v for i, v in self.ortho_defect.items()},
            "sympl_defect": {str(i): v for i, v in self.sympl_defect.items()},
            "h_norm": self.h_norm,
        }


@dataclass(frozen=True)
class AlignmentResult:
    Q: np.ndarray
    blocks: list[np.ndarray]
    residual: float


@dataclass(frozen=True)
class CorrectionResult:
    N: list[np.ndarray]
    residuals: dict[int, float]


def _require_symplectic(M: np.ndarray, name: str) -> None:
    res = symplectic_residual(M)
    if res > default_tol(M.shape[0]):
        raise DomainError(f"{name} is not symplectic (residual {res:.2e})")


def _relative_frame(S, S_tilde, clusters: ClusterStructure) -> np.ndarray:
    S = as_matrix(S, square=True, name="S")
    S_tilde = as_matrix(S_tilde, square=True, name="S_tilde")
    if S.shape != S_tilde.shape:
        raise DomainError("S and S_tilde must have the same shape")
    if half_dim(S, "S") != clusters.n:
        raise DomainError(f"clusters describe n={clusters.n}, matrices have n={S.shape[0] // 2}")
    _require_symplectic(S, "S")
    _require_symplectic(S_tilde, "S_tilde")
    return symplectic_inverse(S) @ S_tilde


def _block(C: np.ndarray, clusters: ClusterStructure, i: int, j: int) -> np.ndarray:
    return symplectic_block(C, SymplecticBlockSpec(clusters.alphas[i], clusters.alphas[j], clusters.n))


def perturbation_report(A, H, S, S_tilde, clusters: ClusterStructure) -> PerturbationReport:
    """Residual norms of the cluster blocks of ``C = S^{-1} S_tilde``.

    Keys are 1-based cluster numbers. ``offdiag`` covers ordered pairs
    ``i != j``; the other four families are per cluster.
    """
    A = as_matrix(A, square=True, name="A")
    H = as_matrix(H, square=True, name="H")
    if A.shape != H.shape:
        raise DomainError("A and H must have the same shape")
    C = _relative_frame(S, S_tilde, clusters)
    n = clusters.n

    offdiag, sym, antisym, ortho, sympl = {}, {}, {}, {}, {}
    for i in range(clusters.r):
        for j in range(clusters.r):
            if i != j:
                offdiag[(i + 1, j + 1)] = spectral_norm(_block(C, clusters, i, j))
        a = to_zero_based(clusters.alphas[i])
        b = a + n
        sym[i + 1] = spectral_norm(C[np.ix_(a, a)] - C[np.ix_(b, b)])
        antisym[i + 1] = spectral_norm(C[np.ix_(a, b)] + C[np.ix_(b, a)])
        B = _block(C, clusters, i, i)
        k = len(a)
        ortho[i + 1] = spectral_norm(B.T @ B - np.eye(2 * k))
        sympl[i + 1] = symplectic_residual(B)
    return PerturbationReport(offdiag, sym, antisym, ortho, sympl, spectral_norm(H))


def align_orthosymplectic(S, S_tilde, clusters: ClusterStructure) -> AlignmentResult:
    """Orthosymplectic ``Q = Q_1 ⊕s ... ⊕s Q_r`` with ``S_tilde ≈ S Q``.

    For each cluster the columns of ``C_{αα} + i C_{αβ}`` are
    orthonormalized (Gram-Schmidt in index order) into ``U + iV`` and
    ``Q_i = [[U, V], [-V, U]]``.
    """
    S = as_matrix(S, square=True, name="S")
    S_tilde = as_matrix(S_tilde, square=True, name="S_tilde")
    C = _relative_frame(S, S_tilde, clusters)
    n = clusters.n
    Q = np.zeros_like(C)
    blocks = []
    for alpha in clusters.alphas:
        a = to_zero_based(alpha)
        b = a + n
        W = complex_gram_schmidt(C[np.ix_(a, a)] + 1j * C[np.ix_(a, b)])
        U, V = W.real, W.imag
        Qi = np.block([[U, V], [-V, U]])
        blocks.append(Qi)
        g = np.concatenate([a, b])
        Q[np.ix_(g, g)] = Qi
    return AlignmentResult(Q, blocks, spectral_norm(S_tilde - S @ Q))


def nearest_diagonalizer(M, S_tilde, clusters: ClusterStructure, A=None) -> np.ndarray:
    """A diagonalizer of ``A`` within ``O(||H||)`` of ``S_tilde``: ``M Q``.

    ``M`` is any diagonalizer of ``A``; if ``A`` is given, that is checked.
    """
    M = as_matrix(M, square=True, name="M")
    if A is not None:
        A = as_matrix(A, square=True, name="A")
        MtAM = M.T @ A @ M
        n = clusters.n
        off = MtAM - np.diag(np.diag(MtAM))
        mismatch = np.diag(MtAM)[:n] - np.diag(MtAM)[n:]
        scale = spectral_norm(A) * spectral_norm(M) ** 2
        if spectral_norm(off) > 1e-8 * scale or np.max(np.abs(mismatch)) > 1e-8 * scale:
            raise DomainError("M does not bring A to Williamson normal form")
    return M @ align_orthosymplectic(M, S_tilde, clusters).Q


def esr(W, iso_tol: float = ISO_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Elementary SR step ``W = S R`` for a ``2n x 2`` frame ``W = [u, v]``.

    ``R = diag(1, u^T J v)`` and ``S = W R^{-1}`` satisfies ``S^T J S = J_2``.
    """
    W = as_matrix(W, name="W")
    n = half_dim(W, "W")
    if W.shape[1] != 2:
        raise DomainError(f"W must have 2 columns, got {W.shape[1]}")
    u, v = W[:, 0], W[:, 1]
    pivot = float(u @ symplectic_form(n) @ v)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0 or abs(pivot) / (nu * nv) <= iso_tol:
        raise IsotropicRangeError(f"range of W is isotropic (u^T J v = {pivot:.3e})")
    R = np.array([[1.0, 0.0], [0.0, pivot]])
    return np.column_stack([u, v / pivot]), R


def symplectic_correction(S, S_tilde, clusters: ClusterStructure, iso_tol: float = ISO_TOL) -> CorrectionResult:
    """Per cluster, a symplectic ``N_i`` close to ``B = C_{γγ}``.

    Columns ``j`` and ``j + k`` of ``B`` form the frame ``M_j``. Each frame is
    made J-orthogonal to the symplectic frames already accepted,
    ``W = M_j - F J^T F^T J M_j``, then normalized by an elementary SR step
    and appended to ``F`` by symplectic concatenation.
    """
    C = _relative_frame(S, S_tilde, clusters)
    Ns, residuals = [], {}
    for i in range(clusters.r):
        B = _block(C, clusters, i, i)
        k = B.shape[0] // 2
        Jk = symplectic_form(k)
        F = None
        for j in range(k):
            Mj = B[:, [j, j + k]]
            if F is None:
                W = Mj
            else:
                W = Mj - F @ symplectic_form(F.shape[1] // 2).T @ F.T @ Jk @ Mj
            try:
                Sj, _ = esr(W, iso_tol)
            except IsotropicRangeError as exc:
                raise IsotropicRangeError(
                    f"cluster {i + 1}, step {j + 1}: {exc}; perturbation is outside the perturbative regime"
                ) from exc
            F = Sj if F is None else symplectic_concat(F, Sj)
        Ns.append(F)
        residuals[i + 1] = spectral_norm(B - F)
    return CorrectionResult(Ns, residuals)


@dataclass
class ScalingStudy:
    ts: list[float]
    curves: dict[str, list[float]]
    slopes: dict[str, float | None]
    config: dict
    dropped: list[float] = field(default_factory=list)
    # construction residuals: max over Q of the orthosymplectic defect and
    # max over N_i of the symplectic defect, per t
    construction: dict[str, list[float]] = field(default_factory=dict)

    def rows(self) -> list[list[float]]:
        return [[t] + [self.curves[m][k] for m in METRICS] for k, t in enumerate(self.ts)]

    def summary(self) -> dict:
        return {
            "slopes": dict(self.slopes),
            "config": dict(self.config),
            "ts": list(self.ts),
            "dropped": list(self.dropped),
        }


def _max(values) -> float:
    values = list(values)
    return max(values) if values else 0.0


def _sweep_point(A, H, S, D, clusters, t):
    At = A + t * H
    At = 0.5 * (At + At.T)
    if sym_eigen(At).eigenvalues[0] <= 0:
        return None
    wt = williamson_decompose(At, clusters.tolerance)
    rep = perturbation_report(A, t * H, S, wt.S, clusters)
    al = align_orthosymplectic(S, wt.S, clusters)
    corr = symplectic_correction(S, wt.S, clusters)
    q_res = max(is_orthosymplectic(al.Q).residuals.values())
    n_res = _max(is_symplectic(N).residuals["symplectic"] for N in corr.N)
    metrics = {
        "offdiag_max": _max(rep.offdiag.values()),
        "sym_defect_max": _max(rep.sym_defect.values()),
        "antisym_defect_max": _max(rep.antisym_defect.values()),
        "ortho_defect_max": _max(rep.ortho_defect.values()),
        "sympl_defect_max": _max(rep.sympl_defect.values()),
        "align_residual": al.residual,
        "correction_residual_max": _max(corr.residuals.values()),
        "spectrum_drift": float(np.max(np.abs(wt.D - D))),
    }
    return metrics, {"q_orthosymplectic": q_res, "n_symplectic": n_res}


def scaling_study(
    spectrum,
    seed: int,
    ts,
    conditioning: float = 4.0,
    drop_below: float = DEFAULT_DROP_BELOW,
    *,
    H=None,
    cluster_tol: float = 1e-8,
    workers: int = 1,
) -> ScalingStudy:
    """Sweep ``A + tH`` over ``ts`` and fit the log-log slope of every metric.

    ``A`` and a reference diagonalizer come from ``make_instance``; ``H``
    defaults to a unit-norm random symmetric matrix seeded from ``seed``.
    Scales at which ``A + tH`` is not positive definite are dropped with a
    warning. Metrics whose curve has fewer than three points above
    ``drop_below`` get slope ``None``.
    """
    spectrum = tuple(float(d) for d in spectrum)
    ts = [float(t) for t in ts]
    if any(t <= 0 for t in ts) or any(b <= a for a, b in zip(ts, ts[1:])):
        raise DomainError("ts must be positive and strictly ascending")
    n = len(spectrum)
    A, S = make_instance(InstanceSpec(n, spectrum, seed, conditioning))
    if H is None:
        H = random_symmetric(2 * n, seed + 1_000_003)
    H = as_matrix(H, square=True, name="H")
    base = williamson_decompose(A, cluster_tol)
    clusters = base.clusters

    work = lambda t: _sweep_point(A, H, S, base.D, clusters, t)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, ts))
    else:
        results = [work(t) for t in ts]

    kept, dropped = [], []
    curves = {m: [] for m in METRICS}
    construction = {"q_orthosymplectic": [], "n_symplectic": []}
    for t, res in zip(ts, results):
        if res is None:
            dropped.append(t)
            continue
        kept.append(t)
        for m in METRICS:
            curves[m].append(res[0][m])
        for key in construction:
            construction[key].append(res[1][key])
    if dropped:
        warnings.warn(f"A + tH not positive definite for t in {dropped}; points dropped", RuntimeWarning, stacklevel=2)
    if len(kept) < 3:
        raise InsufficientDataError(f"only {len(kept)} valid perturbation scales; need 3")

    slopes = {}
    for m in METRICS:
        try:
            slopes[m] = fit_loglog_slope(kept, curves[m], drop_below)[0]
        except InsufficientDataError:
            slopes[m] = None
    config = {
        "spectrum": list(spectrum),
        "seed": seed,
        "conditioning": conditioning,
        "drop_below": drop_below,
        "cluster_tol": cluster_tol,
    }
    return ScalingStudy(kept, curves, slopes, config, dropped, construction)
