"""Lyapunov equations sharing the zero mode along the ones vector.

For symmetric A, Q with ``A 1 = Q 1 = 0`` and A negative definite on the
complement of 1, the equation ``A^T P + P A = -Q`` is solvable only up to
``P + alpha 11^T``.  Restricting to the complement with an orthonormal basis
removes the ambiguity; the minimum-trace solution has ``P 1 = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError, NotLaplacianError, NotPSDError, StabilityError
from .linalg import PSD_TOL, as_sym, laplacian_pinv, max_abs, solve_lyapunov_dense, sym_eig


@dataclass(frozen=True)
class DeflationBasis:
    n: int
    Vtilde: np.ndarray

    def reduce(self, M) -> np.ndarray:
        return self.Vtilde.T @ np.asarray(M) @ self.Vtilde

    def lift(self, Mt) -> np.ndarray:
        return self.Vtilde @ np.asarray(Mt) @ self.Vtilde.T


@dataclass(frozen=True)
class ReducedPair:
    Atilde: np.ndarray
    Qtilde: np.ndarray


@lru_cache(maxsize=64)
def _householder_basis(n: int) -> np.ndarray:
    # reflector H = I - 2uu^T/(u^T u) with u = e1 - 1/sqrt(n) maps e1 to 1/sqrt(n)
    u = np.full(n, -1.0 / np.sqrt(n))
    u[0] += 1.0
    H = np.eye(n) - 2.0 * np.outer(u, u) / (u @ u)
    V = H[:, 1:].copy()
    V.flags.writeable = False
    return V


def make_basis(n: int) -> DeflationBasis:
    """Orthonormal basis of the complement of the ones vector (n x (n-1))."""
    if n < 2:
        raise DimensionError("deflation needs n >= 2")
    return DeflationBasis(n, _householder_basis(n))


def _check_pair(A, Q):
    A = as_sym(A)
    Q = as_sym(Q)
    if A.shape != Q.shape:
        raise DimensionError(f"shape mismatch: {A.shape} vs {Q.shape}")
    n = A.shape[0]
    ones = np.ones(n)
    for name, M in (("A", A), ("Q", Q)):
        if max_abs(M @ ones) > PSD_TOL * (1.0 + max_abs(M)):
            raise NotLaplacianError(f"{name} does not annihilate the ones vector")
    return A, Q


def reduce_pair(A, Q, basis: DeflationBasis | None = None) -> ReducedPair:
    A, Q = _check_pair(A, Q)
    basis = basis or make_basis(A.shape[0])
    return ReducedPair(as_sym(basis.reduce(A), tol=np.inf), as_sym(basis.reduce(Q), tol=np.inf))


def min_trace_solution(A, Q, basis: DeflationBasis | None = None) -> np.ndarray:
    """Minimum-trace symmetric solution of ``A^T P + P A = -Q``.

    Raises StabilityError unless A is negative definite on the complement of
    ones, and NotPSDError unless Q is positive semidefinite there.
    """
    A, Q = _check_pair(A, Q)
    basis = basis or make_basis(A.shape[0])
    red = reduce_pair(A, Q, basis)
    wa = sym_eig(red.Atilde).eigenvalues
    if wa[-1] >= -PSD_TOL * max(1.0, abs(wa[0])):
        raise StabilityError(f"A is not negative definite on 1-perp (eigenvalue {wa[-1]:.3e})")
    wq = sym_eig(red.Qtilde).eigenvalues
    if wq[0] < -PSD_TOL * max(1.0, abs(wq[-1])):
        raise NotPSDError(f"Q is not PSD on 1-perp (eigenvalue {wq[0]:.3e})")
    Pt = solve_lyapunov_dense(red.Atilde, red.Qtilde)
    return as_sym(basis.lift(Pt), tol=np.inf)


def trace_via_pinv(A, Q) -> float:
    """``-(1/2) tr(Q A^+)``: the trace of the minimum-trace solution."""
    A, Q = _check_pair(A, Q)
    # laplacian_pinv only needs A1 = 0 and an invertible shift, not a sign
    return -0.5 * float(np.sum(Q * laplacian_pinv(A)))


def trace_via_shift(A, Q) -> float:
    """``-(1/2) tr(Q (A - 11^T/n)^{-1})``, equal to :func:`trace_via_pinv`."""
    A, Q = _check_pair(A, Q)
    n = A.shape[0]
    shifted = A - np.full((n, n), 1.0 / n)
    try:
        X = np.linalg.solve(shifted, Q)
    except np.linalg.LinAlgError as exc:
        raise StabilityError(f"A - 11^T/n is singular: {exc}") from exc
    return -0.5 * float(np.trace(X))
