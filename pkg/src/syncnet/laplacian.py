"""Weighted graph Laplacians: edge-list form, matrix form, membership tests."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, NotLaplacianError, ValidationError
from .linalg import as_sym, max_abs, sym_eig

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class LaplacianCandidate:
    """Undirected graph on ``n`` nodes with nonnegative conductances.

    Edges are stored canonically: ``i < j``, sorted lexicographically, no
    duplicates.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("a graph needs at least one node")
        canon = []
        for e in self.edges:
            i, j, w = int(e[0]), int(e[1]), float(e[2])
            if i > j:
                i, j = j, i
            if i == j or i < 0 or j >= self.n:
                raise ValidationError(f"invalid edge ({e[0]}, {e[1]}) for n={self.n}")
            if not np.isfinite(w) or w < 0:
                raise ValidationError(f"edge ({i}, {j}) has invalid weight {w}")
            canon.append((i, j, w))
        canon.sort()
        pairs = [(i, j) for i, j, _ in canon]
        if len(set(pairs)) != len(pairs):
            raise ValidationError("duplicate edges")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j, _ in self.edges]

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, _, w in self.edges], dtype=float)


@dataclass(frozen=True)
class MembershipReport:
    is_symmetric: bool
    row_sums_zero: bool
    offdiag_nonpositive: bool
    connected: bool
    lambda2: float

    @property
    def ok(self) -> bool:
        return self.is_symmetric and self.row_sums_zero and self.offdiag_nonpositive and self.connected


def complete_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def incidence(n: int, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
    """Edge-node incidence matrix, one row ``e_i - e_j`` per pair."""
    B = np.zeros((len(pairs), n))
    for k, (i, j) in enumerate(pairs):
        B[k, i] = 1.0
        B[k, j] = -1.0
    return B


def weights_to_matrix(n: int, pairs: Sequence[tuple[int, int]], w) -> np.ndarray:
    """Sum of ``w_e (e_i - e_j)(e_i - e_j)^T`` with the diagonal derived from
    the off-diagonal entries, so rows sum to zero exactly."""
    K = np.zeros((n, n))
    if len(pairs):
        idx = np.asarray(pairs, dtype=int)
        w = np.asarray(w, dtype=float)
        K[idx[:, 0], idx[:, 1]] = -w
        K[idx[:, 1], idx[:, 0]] = -w
    np.fill_diagonal(K, 0.0)
    np.fill_diagonal(K, -K.sum(axis=1))
    return K


def to_matrix(c: LaplacianCandidate) -> np.ndarray:
    return as_sym(weights_to_matrix(c.n, c.pairs, c.weights), tol=0.0)


def support_connected(n: int, pairs: Iterable[tuple[int, int]]) -> bool:
    """Union-find connectivity of the graph spanned by `pairs`."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    components = n
    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
            components -= 1
    return components == 1


def default_tol(K) -> float:
    return 1e-9 * (1.0 + max_abs(K))


def check_membership(K, tol: float | None = None) -> MembershipReport:
    """Evaluate the defining conditions of a connected-graph Laplacian.

    Never raises on a non-member; the report carries the failures.
    """
    K = np.array(K, dtype=float, ndmin=2)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {K.shape}")
    n = K.shape[0]
    if tol is None:
        tol = default_tol(K)
    is_sym = max_abs(K - K.T) <= tol
    row_zero = max_abs(K.sum(axis=1)) <= tol
    off = K - np.diag(np.diag(K))
    offdiag_ok = bool(np.all(off <= tol))
    Ks = 0.5 * (K + K.T)
    w = sym_eig(Ks).eigenvalues
    if n == 1:
        # a single node is trivially connected
        lam2 = 0.0
        connected = True
    else:
        # with zero row sums, lambda_2 of K is the second smallest eigenvalue;
        # positivity of K + 11^T/n is the equivalent test
        lam2 = float(w[1])
        connected = bool(row_zero and lam2 > tol)
    return MembershipReport(bool(is_sym), bool(row_zero), offdiag_ok, connected, lam2)


def from_matrix(K, truncation: float = 0.0) -> LaplacianCandidate:
    """Edge list of a Laplacian; off-diagonal entries with ``|K_ij| <= truncation``
    are dropped."""
    K = as_sym(K)
    n = K.shape[0]
    tol = default_tol(K)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            v = K[i, j]
            if v > tol:
                raise NotLaplacianError(f"positive off-diagonal entry K[{i},{j}] = {v:.6g}")
            if abs(v) > truncation and v < 0:
                edges.append((i, j, -v))
    return LaplacianCandidate(n, tuple(edges))


def path_laplacian(n: int, weight: float = 1.0) -> np.ndarray:
    return to_matrix(LaplacianCandidate(n, tuple((i, i + 1, weight) for i in range(n - 1))))
