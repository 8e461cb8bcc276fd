"""Semidefinite-program form of the design problem, for external solvers.

Variables are the upper triangles of three symmetric n x n matrices K, X, Y
(stacked in that order).  In block standard form the problem reads

    minimize   c^T x
    subject to sum_k F_k x_k - F_0  >= 0      (block diagonal)

with block 1 the 2n x 2n LMI ``[[X, Q2^{1/2}], [Q2^{1/2}, K + 11^T/n]]``
and block 2 a diagonal (linear) block holding the sign constraints on K, the
row-sum equalities (as pairs of opposite inequalities) and the l1
epigraph ``-Y <= W o K <= Y``.  The objective is
``1/2 tr(X + r K) + gamma * sum_ij Y_ij``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import SyncNetError
from .linalg import sqrt_psd
from .objective import ProblemSpec, eval_J

Entry = tuple[int, int, int, int, float]  # (matno, blockno, i, j, value), 1-based


class SdpCheck(NamedTuple):
    lmi_min_eig: float
    lp_min: float
    objective: float
    max_violation: float


@dataclass(frozen=True)
class SdpProblemData:
    n: int
    block_sizes: tuple[int, int]
    c: np.ndarray
    entries: tuple[Entry, ...]
    lp_labels: tuple[str, ...]
    Q2_sqrt: np.ndarray
    W: np.ndarray
    M: np.ndarray
    gamma: float
    r: float

    @property
    def n_vars(self) -> int:
        return self.c.size

    @property
    def lmi_size(self) -> int:
        return self.block_sizes[0]

    @property
    def n_equalities(self) -> int:
        """Row-sum equalities K1 = 0 (each stored as two LP rows)."""
        return sum(1 for s in self.lp_labels if s.startswith("rowsum+"))

    @property
    def n_sign_constraints(self) -> int:
        return sum(1 for s in self.lp_labels if s.startswith("sign"))

    def block_matrices(self, x):
        """Evaluate ``sum_k F_k x_k - F_0`` blockwise at the variable vector `x`."""
        x = np.asarray(x, dtype=float)
        coef = np.concatenate([[-1.0], x])
        lmi = np.zeros((self.lmi_size, self.lmi_size))
        lp = np.zeros(-self.block_sizes[1])
        for mat, blk, i, j, v in self.entries:
            a = coef[mat] * v
            if blk == 1:
                lmi[i - 1, j - 1] += a
                if i != j:
                    lmi[j - 1, i - 1] += a
            else:
                lp[i - 1] += a
        return lmi, lp


def _sym_index(n):
    iu, ju = np.triu_indices(n)
    return list(zip(iu.tolist(), ju.tolist()))


def variable_layout(n):
    """Map ``(name, i, j)`` with i <= j to a 0-based variable index."""
    pairs = _sym_index(n)
    m = len(pairs)
    index = {}
    for base, name in enumerate("KXY"):
        for k, (i, j) in enumerate(pairs):
            index[(name, i, j)] = base * m + k
    return index


def _var(index, name, i, j):
    return index[(name, min(i, j), max(i, j))]


def assemble_sdp(spec: ProblemSpec) -> SdpProblemData:
    n = spec.n
    S = sqrt_psd(spec.Q2)
    W = spec.W_eff
    M = np.ones((n, n)) - np.eye(n)
    index = variable_layout(n)
    nv = len(index)

    c = np.zeros(nv)
    for i in range(n):
        c[_var(index, "K", i, i)] = 0.5 * spec.r
        c[_var(index, "X", i, i)] = 0.5
    for i, j in _sym_index(n):
        # Y symmetric: off-diagonal variables appear twice in sum_ij Y_ij
        c[_var(index, "Y", i, j)] = spec.gamma * (1.0 if i == j else 2.0)

    entries: list[Entry] = []
    # block 1: F_0 = -[[0, S], [S, 11^T/n]]
    for i in range(n):
        for j in range(i, n):
            if S[i, j] != 0.0:
                entries.append((0, 1, i + 1, n + j + 1, -S[i, j]))
                if i != j:
                    entries.append((0, 1, j + 1, n + i + 1, -S[i, j]))
            entries.append((0, 1, n + i + 1, n + j + 1, -1.0 / n))
    for i, j in _sym_index(n):
        entries.append((_var(index, "X", i, j) + 1, 1, i + 1, j + 1, 1.0))
        entries.append((_var(index, "K", i, j) + 1, 1, n + i + 1, n + j + 1, 1.0))

    labels: list[str] = []

    def lp_row(label, terms):
        row = len(labels) + 1
        labels.append(label)
        for var, coeff in terms:
            entries.append((var + 1, 2, row, row, coeff))

    # M o K <= 0, one row per ordered off-diagonal position
    for i in range(n):
        for j in range(n):
            if i != j and M[i, j] != 0:
                lp_row(f"sign[{i},{j}]", [(_var(index, "K", i, j), -M[i, j])])
    # K 1 = 0 as 0 <= (K1)_i <= 0
    for i in range(n):
        terms = [(_var(index, "K", i, j), 1.0) for j in range(n)]
        lp_row(f"rowsum+[{i}]", terms)
        lp_row(f"rowsum-[{i}]", [(v, -a) for v, a in terms])
    # -Y <= W o K <= Y on the upper triangle (all matrices symmetric)
    for i, j in _sym_index(n):
        y = _var(index, "Y", i, j)
        k = _var(index, "K", i, j)
        lp_row(f"epi+[{i},{j}]", [(y, 1.0), (k, -W[i, j])] if W[i, j] else [(y, 1.0)])
        lp_row(f"epi-[{i},{j}]", [(y, 1.0), (k, W[i, j])] if W[i, j] else [(y, 1.0)])

    return SdpProblemData(
        n=n,
        block_sizes=(2 * n, -len(labels)),
        c=c,
        entries=tuple(entries),
        lp_labels=tuple(labels),
        Q2_sqrt=S,
        W=np.array(W),
        M=M,
        gamma=spec.gamma,
        r=spec.r,
    )


def pack_variables(data: SdpProblemData, K, X, Y) -> np.ndarray:
    index = variable_layout(data.n)
    x = np.zeros(data.n_vars)
    mats = {"K": np.asarray(K), "X": np.asarray(X), "Y": np.asarray(Y)}
    for (name, i, j), k in index.items():
        x[k] = mats[name][i, j]
    return x


def substitution_point(K, spec: ProblemSpec):
    """The (K, X, Y) that makes the SDP objective equal the design cost at K."""
    K = np.asarray(K, dtype=float)
    n = K.shape[0]
    S = sqrt_psd(spec.Q2)
    X = S @ np.linalg.solve(K + np.full((n, n), 1.0 / n), S)
    X = 0.5 * (X + X.T)
    Y = np.abs(spec.W_eff * K)
    return K, X, Y


def evaluate(data: SdpProblemData, x) -> SdpCheck:
    lmi, lp = data.block_matrices(x)
    lmin = float(np.linalg.eigvalsh(lmi)[0])
    lpmin = float(lp.min()) if lp.size else 0.0
    viol = max(0.0, -lmin, -lpmin)
    return SdpCheck(lmin, lpmin, float(data.c @ x), viol)


def verify_substitution(K, spec: ProblemSpec, data: SdpProblemData | None = None) -> dict:
    """Check that a design K, lifted to (K, X, Y), is feasible for the SDP and
    reproduces the design cost."""
    data = data or assemble_sdp(spec)
    x = pack_variables(data, *substitution_point(K, spec))
    chk = evaluate(data, x)
    J = eval_J(K, spec).total
    rel = abs(chk.objective - J) / max(1.0, abs(J))
    return {
        "lmi_min_eig": chk.lmi_min_eig,
        "lp_min": chk.lp_min,
        "max_violation": chk.max_violation,
        "sdp_objective": chk.objective,
        "design_objective": J,
        "objective_rel_gap": rel,
    }


def write_sdpa(data: SdpProblemData, path, comment: str = "") -> None:
    """Write the problem in SDPA sparse format."""
    with open(path, "w") as fh:
        fh.write(f'"{comment or "conductance network design"}: n={data.n} gamma={data.gamma!r} r={data.r!r}\n')
        fh.write(f"{data.n_vars}\n")
        fh.write(f"{len(data.block_sizes)}\n")
        fh.write(" ".join(str(b) for b in data.block_sizes) + "\n")
        fh.write(" ".join(f"{v:.17g}" for v in data.c) + "\n")
        for mat, blk, i, j, v in data.entries:
            fh.write(f"{mat} {blk} {i} {j} {v:.17g}\n")


def read_sdpa(path):
    """Parse an SDPA sparse file into ``(c, block_sizes, entries)``."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and ln.lstrip()[0] not in '"*']
    try:
        m = int(lines[0].split()[0])
        nblocks = int(lines[1].split()[0])
        sizes = tuple(int(t) for t in lines[2].replace(",", " ").split()[:nblocks])
        c = np.array([float(t) for t in lines[3].replace(",", " ").split()[:m]])
        entries = []
        for ln in lines[4:]:
            t = ln.split()
            entries.append((int(t[0]), int(t[1]), int(t[2]), int(t[3]), float(t[4])))
    except (IndexError, ValueError) as exc:
        raise SyncNetError(f"malformed SDPA file {path}: {exc}") from exc
    return c, sizes, tuple(entries)
