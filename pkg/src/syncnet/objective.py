"""Synchronization cost for identical LC oscillators.

With uniform inductance the H2 cost of the conductance matrix K reduces to

    J(K) = 1/2 tr(Q2 (K + 11^T/n)^{-1}) + r/2 tr(K)

(the constant shift of the minimum-trace convention taken as zero).  The
full second-order model is kept around as an independent check in
:func:`eval_full_lyapunov_oracle`.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .deflation import make_basis, min_trace_solution
from .errors import DimensionError, DisconnectedError, NotLaplacianError, NotPSDError, ValidationError
from .linalg import PSD_TOL, as_sym, max_abs, solve_lyapunov_dense, sym_eig

ORACLE_MAX_N = 16


@dataclass(frozen=True)
class ProblemSpec:
    """One design instance.

    Q2 must annihilate the ones vector and be positive definite on its
    complement.  ``W`` defaults to all ones.  With ``offdiag_only_l1`` the
    sparsity penalty skips the diagonal of K.
    """

    Q2: np.ndarray
    r: float = 1.0
    gamma: float = 0.0
    W: np.ndarray | None = None
    tol_grad: float = 1e-9
    tol_obj: float = 1e-12
    offdiag_only_l1: bool = False
    n: int = field(init=False)

    def __post_init__(self):
        Q2 = as_sym(self.Q2)
        n = Q2.shape[0]
        object.__setattr__(self, "Q2", Q2)
        object.__setattr__(self, "n", n)
        if not (np.isfinite(self.r) and self.r > 0):
            raise ValidationError(f"r must be positive, got {self.r}")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise ValidationError(f"gamma must be nonnegative, got {self.gamma}")
        if self.tol_grad <= 0 or self.tol_obj <= 0:
            raise ValidationError("tolerances must be positive")
        W = np.ones((n, n)) if self.W is None else as_sym(self.W)
        if W.shape != (n, n):
            raise DimensionError(f"W has shape {W.shape}, expected {(n, n)}")
        if np.any(W < 0):
            raise ValidationError("W must be elementwise nonnegative")
        W = np.array(W)
        W.flags.writeable = False
        object.__setattr__(self, "W", W)

        scale = 1.0 + max_abs(Q2)
        if max_abs(Q2 @ np.ones(n)) > PSD_TOL * scale:
            raise NotLaplacianError("Q2 rows must sum to zero")
        if n >= 2:
            w = sym_eig(make_basis(n).reduce(Q2)).eigenvalues
            if w[0] <= PSD_TOL * scale:
                raise NotPSDError(
                    f"Q2 must be positive definite on 1-perp (smallest eigenvalue {w[0]:.3e})"
                )

    @property
    def W_eff(self) -> np.ndarray:
        """Weights actually applied to |K| in the penalty."""
        if not self.offdiag_only_l1:
            return self.W
        W = np.array(self.W)
        np.fill_diagonal(W, 0.0)
        return W

    def with_(self, **changes) -> "ProblemSpec":
        return replace(self, **changes)


@dataclass(frozen=True)
class ObjectiveValue:
    total: float
    h2_part: float
    l1_part: float


class LyapunovResiduals(NamedTuple):
    first: float
    second: float
    third: float


def _shifted_factor(K):
    n = K.shape[0]
    try:
        return scipy.linalg.cho_factor(K + np.full((n, n), 1.0 / n), lower=True)
    except np.linalg.LinAlgError as exc:
        raise DisconnectedError("K + 11^T/n is not positive definite; graph is disconnected") from exc


def _check_K(K, spec):
    K = as_sym(K)
    if K.shape != (spec.n, spec.n):
        raise DimensionError(f"K has shape {K.shape}, spec has n={spec.n}")
    if max_abs(K.sum(axis=1)) > PSD_TOL * (1.0 + max_abs(K)):
        raise NotLaplacianError("K rows must sum to zero")
    return K


def h2_value(K, Q2, r) -> float:
    """Smooth part of the cost; no input validation (hot path)."""
    c = _shifted_factor(K)
    return 0.5 * float(np.trace(scipy.linalg.cho_solve(c, Q2))) + 0.5 * r * float(np.trace(K))


def l1_value(K, spec: ProblemSpec) -> float:
    return spec.gamma * float(np.sum(spec.W_eff * np.abs(K)))


def eval_J(K, spec: ProblemSpec) -> ObjectiveValue:
    K = _check_K(K, spec)
    h2 = h2_value(K, spec.Q2, spec.r)
    l1 = l1_value(K, spec)
    return ObjectiveValue(h2 + l1, h2, l1)


def h2_gradient(K, Q2, r) -> np.ndarray:
    n = K.shape[0]
    c = _shifted_factor(K)
    M = scipy.linalg.cho_solve(c, np.eye(n))
    G = -0.5 * M @ Q2 @ M + 0.5 * r * (np.eye(n) - np.full((n, n), 1.0 / n))
    return 0.5 * (G + G.T)


def grad_J(K, spec: ProblemSpec) -> np.ndarray:
    """Gradient of the smooth part with respect to symmetric K.

    ``-(1/2) M Q2 M + (r/2)(I - 11^T/n)`` with ``M = (K + 11^T/n)^{-1}``;
    it annihilates the ones vector because ``M 1 = 1`` and ``Q2 1 = 0``.
    """
    K = _check_K(K, spec)
    return h2_gradient(K, spec.Q2, spec.r)


def edge_directional(G, pairs) -> np.ndarray:
    """``b_e^T G b_e`` for each pair, with ``b_e = e_i - e_j``."""
    idx = np.asarray(pairs, dtype=int).reshape(-1, 2)
    i, j = idx[:, 0], idx[:, 1]
    return G[i, i] + G[j, j] - 2.0 * G[i, j]


def closed_loop_reduced(K, L: float):
    """Second-order network matrix restricted to the complement of ones.

    State is (integrated voltage, voltage) in deflated coordinates; returns
    the 2(n-1) square matrix ``[[0, I], [-I/L, -K~]]`` and ``K~``.
    """
    n = K.shape[0]
    basis = make_basis(n)
    Kt = basis.reduce(K)
    m = n - 1
    A = np.zeros((2 * m, 2 * m))
    A[:m, m:] = np.eye(m)
    A[m:, :m] = -np.eye(m) / L
    A[m:, m:] = -Kt
    return A, Kt, basis


def eval_full_lyapunov_oracle(K, L: float, spec: ProblemSpec) -> float:
    """H2 cost from the full oscillator model, for cross-checking :func:`eval_J`.

    Solves the closed-loop Lyapunov equation with output weight
    ``diag(0, Q2 + r K^2)`` in deflated coordinates and returns the trace of
    the voltage block.  The answer does not depend on the inductance L.
    """
    K = _check_K(K, spec)
    if spec.n > ORACLE_MAX_N:
        raise DimensionError(f"oracle is limited to n <= {ORACLE_MAX_N}")
    if spec.n < 2:
        raise DimensionError("oracle needs n >= 2")
    if not L > 0:
        raise ValidationError("inductance must be positive")
    A, Kt, basis = closed_loop_reduced(K, L)
    m = spec.n - 1
    Qcl = np.zeros((2 * m, 2 * m))
    Qcl[m:, m:] = basis.reduce(spec.Q2) + spec.r * Kt @ Kt
    P = solve_lyapunov_dense(A, 0.5 * (Qcl + Qcl.T))
    return float(np.trace(P[m:, m:]))


def check_lyapunov_blocks(P0, P1, P2, K, L: float, spec: ProblemSpec) -> LyapunovResiduals:
    """Max-norm residuals of the three block equations for P = [[P1, P0], [P0^T, P2]]
    under uniform inductance ``H = I/L``."""
    P0, P1, P2, K = (np.atleast_2d(np.asarray(M, dtype=float)) for M in (P0, P1, P2, K))
    H = np.eye(K.shape[0]) / L
    r1 = H @ P0.T + P0 @ H
    r2 = P0 @ K - P1 + H @ P2
    r3 = K @ P2 + P2 @ K - P0 - P0.T - spec.Q2 - spec.r * K @ K
    return LyapunovResiduals(max_abs(r1), max_abs(r2), max_abs(r3))


def lyapunov_blocks(K, L: float, spec: ProblemSpec):
    """Blocks (P0, P1, P2) built from the zero-mode-free voltage block.

    P0 = 0, P2 the minimum-trace solution of ``K P2 + P2 K = Q2 + r K^2``
    and ``P1 = P2 / L``.
    """
    K = as_sym(K)
    n = K.shape[0]
    if n == 1:
        Z = np.zeros((1, 1))
        return Z, Z, Z
    P2 = min_trace_solution(-K, spec.Q2 + spec.r * K @ K)
    return np.zeros((n, n)), P2 / L, P2
