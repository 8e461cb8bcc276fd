"""Dense symmetric linear algebra.

Matrices are plain 2-d numpy arrays.  ``as_sym`` is the single entry point
that turns caller data into an exactly symmetric, read-only array; every
other routine here assumes its inputs went through it.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    ConditioningError,
    ConvergenceError,
    DimensionError,
    DisconnectedError,
    NotLaplacianError,
    NotPSDError,
    StabilityError,
    ValidationError,
)

JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-12
PSD_TOL = 1e-10
PINV_COND_MAX = 1e12
LYAP_MAX_DIM = 64


class EigDecomp(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def max_abs(A) -> float:
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def as_sym(A, tol: float = 1e-10) -> np.ndarray:
    """Return a read-only, exactly symmetric float copy of `A`.

    Raises ValidationError if `A` is not square or if its asymmetry exceeds
    ``tol * (1 + max|A|)``.
    """
    A = np.array(A, dtype=float, ndmin=2)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] < 1:
        raise DimensionError("matrix dimension must be at least 1")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    asym = max_abs(A - A.T)
    if asym > tol * (1.0 + max_abs(A)):
        raise ValidationError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    # a + b == b + a in IEEE arithmetic, so this is symmetric bit for bit
    S = 0.5 * (A + A.T)
    S.flags.writeable = False
    return S


def consensus_projector(n: int) -> np.ndarray:
    """I - 11^T/n, the orthogonal projector onto the complement of ones."""
    return np.eye(n) - np.full((n, n), 1.0 / n)


def _jacobi_rotate(A, V, p, q):
    apq = A[p, q]
    tau = (A[q, q] - A[p, p]) / (2.0 * apq)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    Ap = A[:, p].copy()
    Aq = A[:, q]
    A[:, p] = c * Ap - s * Aq
    A[:, q] = s * Ap + c * Aq
    Ap = A[p, :].copy()
    Aq = A[q, :]
    A[p, :] = c * Ap - s * Aq
    A[q, :] = s * Ap + c * Aq
    A[p, q] = A[q, p] = 0.0
    Vp = V[:, p].copy()
    Vq = V[:, q]
    V[:, p] = c * Vp - s * Vq
    V[:, q] = s * Vp + c * Vq


def sym_eig(A) -> EigDecomp:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Eigenvalues are returned in ascending order.  Each eigenvector is
    normalized so that its first component of magnitude above 1e-12 is
    positive, which makes the output a deterministic function of the input.
    """
    A = np.array(as_sym(A), copy=True)
    n = A.shape[0]
    V = np.eye(n)
    fro = np.linalg.norm(A)
    thresh = JACOBI_OFF_TOL * fro

    def off_norm():
        return np.linalg.norm(A - np.diag(np.diag(A)))

    off = off_norm()
    sweeps = 0
    while off > thresh:
        if sweeps >= JACOBI_MAX_SWEEPS:
            raise ConvergenceError(
                f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps "
                f"(off-diagonal norm {off:.3e})",
                residual=off,
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                # rotations on negligible entries only add rounding noise
                if abs(A[p, q]) > 1e-300 and abs(A[p, q]) > 1e-18 * fro:
                    _jacobi_rotate(A, V, p, q)
        sweeps += 1
        off = off_norm()

    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]
    for k in range(n):
        col = V[:, k]
        big = np.flatnonzero(np.abs(col) > 1e-12)
        if big.size and col[big[0]] < 0:
            V[:, k] = -col
    return EigDecomp(w, V)


def sqrt_psd(A) -> np.ndarray:
    """Symmetric PSD square root.

    Eigenvalues down to ``-1e-10 * ||A||_2`` are treated as rounding noise
    and clamped to zero; anything more negative raises NotPSDError.  A null
    vector of A stays a null vector of the result to machine precision.
    """
    A = as_sym(A)
    w, V = sym_eig(A)
    scale = float(np.max(np.abs(w)))
    if w[0] < -PSD_TOL * scale:
        raise NotPSDError(f"matrix is not positive semidefinite (eigenvalue {w[0]:.3e})")
    # eigenvalues at rounding level are zeros in disguise; their square
    # roots would otherwise leak ~sqrt(eps) into the null space
    w = np.where(w <= 64 * w.size * np.finfo(float).eps * scale, 0.0, w)
    S = (V * np.sqrt(w)) @ V.T
    return as_sym(S, tol=np.inf)


def _check_zero_rows(K, what="matrix"):
    n = K.shape[0]
    rs = max_abs(K @ np.ones(n))
    if rs > PSD_TOL * max(max_abs(K), 1.0):
        raise NotLaplacianError(f"{what} has nonzero row sums (max {rs:.3e})")


def laplacian_pinv(K) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a symmetric matrix with K1 = 0.

    Uses ``K^+ = (K + 11^T/n)^{-1} - 11^T/n``, valid whenever the shifted
    matrix is invertible (for a Laplacian: the graph is connected).
    """
    K = as_sym(K)
    n = K.shape[0]
    _check_zero_rows(K)
    J = np.full((n, n), 1.0 / n)
    shifted = K + J
    cond = np.linalg.cond(shifted)
    if not np.isfinite(cond) or cond > PINV_COND_MAX:
        raise DisconnectedError(
            f"K + 11^T/n is numerically singular (condition {cond:.3e}); "
            "graph is disconnected"
        )
    Kp = np.linalg.solve(shifted, np.eye(n)) - J
    return as_sym(Kp, tol=np.inf)


def _half_index(n):
    return np.triu_indices(n)


def solve_lyapunov_dense(A, Q) -> np.ndarray:
    """Solve ``A^T P + P A = -Q`` for symmetric P by a direct linear solve.

    The symmetric unknown is half-vectorized (n(n+1)/2 unknowns) and the
    resulting square system is solved with LU.  Intended as an exact
    reference at small scale, not as a production Lyapunov solver.
    """
    A = np.array(A, dtype=float, ndmin=2)
    Q = as_sym(Q)
    n = A.shape[0]
    if A.shape != (n, n) or Q.shape != (n, n):
        raise DimensionError(f"shape mismatch: A {A.shape}, Q {Q.shape}")
    if n > LYAP_MAX_DIM:
        raise DimensionError(f"dimension {n} exceeds the dense Lyapunov limit {LYAP_MAX_DIM}")
    re = np.linalg.eigvals(A).real
    if np.max(re) > -1e-10:
        raise StabilityError(f"A is not Hurwitz (max real part {np.max(re):.3e})")

    iu, ju = _half_index(n)
    m = iu.size
    At = A.T
    L = np.empty((m, m))
    E = np.zeros((n, n))
    for col, (k, l) in enumerate(zip(iu, ju)):
        E[k, l] = E[l, k] = 1.0
        L[:, col] = (At @ E + E @ A)[iu, ju]
        E[k, l] = E[l, k] = 0.0
    try:
        cond = np.linalg.cond(L)
        if not np.isfinite(cond) or cond > 1e14:
            raise ConditioningError(f"Lyapunov system is singular (condition {cond:.3e})")
        x = np.linalg.solve(L, -Q[iu, ju])
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"Lyapunov system is singular: {exc}") from exc
    P = np.zeros((n, n))
    P[iu, ju] = x
    P[ju, iu] = x
    return as_sym(P, tol=np.inf)
