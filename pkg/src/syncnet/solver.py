"""Conductance network design.

The decision variable is the vector of edge weights ``w >= 0`` over a
candidate edge set, with ``K = sum_e w_e (e_i - e_j)(e_i - e_j)^T``.  On the
nonnegative orthant the weighted l1 penalty ``gamma * sum_ij W_ij |K_ij|`` is
linear in ``w`` (coefficient ``gamma (2 W_ij + W_ii + W_jj)`` per edge), so
the proximal step is a shifted projection onto ``w >= 0``.  The smooth part
blows up as the graph disconnects, which keeps iterates connected: trial
points that disconnect the graph evaluate to +inf and are rejected by the
line search.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DisconnectedError, LineSearchError, NotLaplacianError, SolverError, ValidationError
from .laplacian import complete_pairs, support_connected, weights_to_matrix
from .linalg import as_sym, max_abs, sqrt_psd
from .objective import ObjectiveValue, ProblemSpec, edge_directional, eval_J, h2_gradient, h2_value

EPS = np.finfo(float).eps
# relative step below which a stalled iteration counts as converged
STALL_STEP = 1e-13


class Termination(str, enum.Enum):
    GRADIENT_TOL = "gradient_tol"
    STEP_TOL = "step_tol"
    MAX_ITER = "max_iter"


class HistoryEntry(NamedTuple):
    objective: float
    step: float


class OuterStep(NamedTuple):
    iteration: int
    nnz_offdiag: int
    change: float
    inner_iterations: int
    termination: str
    objective: float


@dataclass(frozen=True)
class EdgeWeightVector:
    pairs: tuple[tuple[int, int], ...]
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.shape != (len(self.pairs),):
            raise ValidationError("one weight per edge required")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValidationError("edge weights must be finite and nonnegative")
        object.__setattr__(self, "pairs", tuple((int(i), int(j)) for i, j in self.pairs))
        object.__setattr__(self, "w", w)

    def to_matrix(self, n: int) -> np.ndarray:
        return weights_to_matrix(n, self.pairs, self.w)

    @classmethod
    def from_matrix(cls, K, pairs) -> "EdgeWeightVector":
        K = np.asarray(K)
        pairs = tuple(pairs)
        w = np.array([max(-K[i, j], 0.0) for i, j in pairs])
        return cls(pairs, w)


@dataclass(frozen=True)
class SolveReport:
    K_opt: np.ndarray
    objective: ObjectiveValue
    iterations: int
    termination: Termination
    history: tuple[HistoryEntry, ...]
    nnz_offdiag: int
    truncation: float
    W: np.ndarray
    outer: tuple[OuterStep, ...] = ()
    outer_termination: str | None = None
    params: dict = field(default_factory=dict)

    def summary(self) -> dict:
        d = {
            "n": int(self.K_opt.shape[0]),
            "total": self.objective.total,
            "h2_part": self.objective.h2_part,
            "l1_part": self.objective.l1_part,
            "iterations": self.iterations,
            "termination": self.termination.value,
            "nnz_offdiag": self.nnz_offdiag,
            "truncation": self.truncation,
        }
        if self.outer:
            d["outer_iterations"] = len(self.outer)
            d["outer_termination"] = self.outer_termination
            d["outer_nnz"] = [s.nnz_offdiag for s in self.outer]
            d["outer_change"] = [s.change for s in self.outer]
        d.update(self.params)
        return d


def default_truncation(K) -> float:
    """1e-3 times the largest off-diagonal magnitude."""
    K = np.asarray(K)
    off = np.abs(K - np.diag(np.diag(K)))
    return 1e-3 * float(off.max()) if off.size else 0.0


def nnz_offdiag(K, truncation: float | None = None) -> int:
    """Count of ordered off-diagonal positions with ``|K_ij| > truncation``."""
    K = np.asarray(K)
    if truncation is None:
        truncation = default_truncation(K)
    off = np.abs(K - np.diag(np.diag(K)))
    return int(np.count_nonzero(off > truncation))


def closed_form(spec: ProblemSpec) -> np.ndarray:
    """``Q2^{1/2} / sqrt(r)``, the unconstrained stationary point."""
    return as_sym(sqrt_psd(spec.Q2) / math.sqrt(spec.r), tol=np.inf)


def edge_l1_coefficients(spec: ProblemSpec, pairs) -> np.ndarray:
    """Per-edge slope of the l1 penalty on the nonnegative orthant."""
    W = spec.W_eff
    idx = np.asarray(pairs, dtype=int).reshape(-1, 2)
    i, j = idx[:, 0], idx[:, 1]
    # W symmetric, so the (i, j) and (j, i) entries contribute 2 W_ij
    return spec.gamma * (2.0 * W[i, j] + W[i, i] + W[j, j])


def kkt_residual(spec: ProblemSpec, pairs, w) -> np.ndarray:
    """First-order optimality violation per edge, computed from scratch.

    ``|g_e + c_e|`` on edges with positive weight and ``max(0, -(g_e + c_e))``
    on edges at zero, with g the smooth edge derivative and c the l1 slope.
    """
    pairs = list(pairs)
    w = np.asarray(w, dtype=float)
    K = weights_to_matrix(spec.n, pairs, w)
    g = edge_directional(h2_gradient(K, spec.Q2, spec.r), pairs) + edge_l1_coefficients(spec, pairs)
    return np.where(w > 0, np.abs(g), np.maximum(0.0, -g))


def kkt_scale(spec: ProblemSpec) -> float:
    return 1.0 + max_abs(spec.Q2)


def all_to_all_optimal(spec: ProblemSpec):
    """Best uniform all-to-all coupling ``K = k (I - 11^T/n)``.

    The restricted cost is ``tr(Q2)/(2k) + r k (n-1)/2``, minimized at
    ``k = sqrt(tr(Q2) / ((n-1) r))``.
    """
    n = spec.n
    if n < 2:
        raise ValidationError("all-to-all coupling needs n >= 2")
    k = math.sqrt(float(np.trace(spec.Q2)) / ((n - 1) * spec.r))
    K = k * (np.eye(n) - np.full((n, n), 1.0 / n))
    return k, as_sym(K, tol=np.inf)


def _canonical_pairs(n, edge_set):
    if edge_set is None:
        return tuple(complete_pairs(n))
    pairs = []
    for e in edge_set:
        i, j = int(e[0]), int(e[1])
        if i > j:
            i, j = j, i
        if i == j or i < 0 or j >= n:
            raise ValidationError(f"invalid pair ({e[0]}, {e[1]}) for n={n}")
        pairs.append((i, j))
    pairs = sorted(set(pairs))
    return tuple(pairs)


def default_init(spec: ProblemSpec, pairs) -> np.ndarray:
    """Strictly feasible starting weights.

    On the complete graph: the closed form with positive couplings clipped
    to zero, if still connected.  Otherwise uniform weights at the
    all-to-all optimal level.
    """
    n = spec.n
    if len(pairs) == n * (n - 1) // 2:
        K0 = closed_form(spec)
        w = np.array([max(-K0[i, j], 0.0) for i, j in pairs])
        if support_connected(n, [p for p, x in zip(pairs, w) if x > 0]):
            return w
    k, _ = all_to_all_optimal(spec)
    return np.full(len(pairs), k / n)


def _finish(spec, pairs, w, iterations, termination, history, truncation=None, **params) -> SolveReport:
    K = as_sym(weights_to_matrix(spec.n, pairs, w), tol=0.0)
    if truncation is None:
        truncation = default_truncation(K)
    return SolveReport(
        K_opt=K,
        objective=eval_J(K, spec),
        iterations=iterations,
        termination=termination,
        history=tuple(history),
        nnz_offdiag=nnz_offdiag(K, truncation),
        truncation=truncation,
        W=spec.W,
        params=params,
    )


class _EdgeProblem:
    """Smooth + linear objective over edge weights, with cached pieces."""

    def __init__(self, spec: ProblemSpec, pairs):
        self.spec = spec
        self.pairs = pairs
        self.c = edge_l1_coefficients(spec, pairs)
        self.evals = 0

    def K(self, w):
        return weights_to_matrix(self.spec.n, self.pairs, w)

    def value(self, w) -> float:
        self.evals += 1
        try:
            return h2_value(self.K(w), self.spec.Q2, self.spec.r) + float(self.c @ w)
        except DisconnectedError:
            return math.inf

    def grad(self, w) -> np.ndarray:
        G = h2_gradient(self.K(w), self.spec.Q2, self.spec.r)
        return edge_directional(G, self.pairs) + self.c

    @staticmethod
    def kkt(w, g) -> float:
        r = np.where(w > 0, np.abs(g), np.maximum(0.0, -g))
        return float(r.max()) if r.size else 0.0


def _spg(prob: _EdgeProblem, w, tol, tol_obj, max_iter):
    """Projected gradient with Barzilai-Borwein steps and Armijo backtracking.

    Monotone: every accepted iterate lowers the objective (up to a rounding
    allowance of a few ulps).
    """
    f = prob.value(w)
    if not math.isfinite(f):
        raise DisconnectedError("initial weights do not give a connected graph")
    g = prob.grad(w)
    history = [HistoryEntry(f, 0.0)]
    gmax = float(np.max(np.abs(g))) if g.size else 0.0
    t = 1.0 / gmax if gmax > 0 else 1.0
    for it in range(max_iter):
        if prob.kkt(w, g) <= tol:
            return w, it, Termination.GRADIENT_TOL, history
        slack = 4.0 * EPS * abs(f)
        for _ in range(80):
            wn = np.maximum(w - t * g, 0.0)
            d = wn - w
            fn = prob.value(wn)
            if fn <= f + 1e-4 * float(g @ d) + slack:
                break
            t *= 0.5
        else:
            if max_abs(d) <= 1e-12 * (1.0 + max_abs(w)):
                return w, it, Termination.STEP_TOL, history
            raise LineSearchError(
                "backtracking failed to find a decrease",
                {"iteration": it, "step": t, "objective": f, "kkt": prob.kkt(w, g)},
            )
        gn = prob.grad(wn)
        s = wn - w
        y = gn - g
        sy = float(s @ y)
        decrease = f - fn
        w, f, g = wn, fn, gn
        history.append(HistoryEntry(f, t))
        if decrease <= tol_obj * max(1.0, abs(f)) and max_abs(s) <= STALL_STEP * (1.0 + max_abs(w)):
            if prob.kkt(w, g) <= tol:
                return w, it + 1, Termination.GRADIENT_TOL, history
            return w, it + 1, Termination.STEP_TOL, history
        if sy > 0:
            # alternate the two Barzilai-Borwein estimates
            t = float(s @ s) / sy if it % 2 == 0 else sy / float(y @ y)
        else:
            t = 2.0 * t
        t = min(max(t, 1e-12), 1e12)
    if prob.kkt(w, g) <= tol:
        return w, max_iter, Termination.GRADIENT_TOL, history
    return w, max_iter, Termination.MAX_ITER, history


def _fista(prob: _EdgeProblem, w, tol, tol_obj, max_iter):
    """Accelerated projected gradient (monotone variant) with function-value restart."""
    x = w
    fx = prob.value(x)
    if not math.isfinite(fx):
        raise DisconnectedError("initial weights do not give a connected graph")
    gx = prob.grad(x)
    history = [HistoryEntry(fx, 0.0)]
    y, fy, gy = x, fx, gx
    theta = 1.0
    gmax = float(np.max(np.abs(gx))) if gx.size else 0.0
    t = 1.0 / gmax if gmax > 0 else 1.0
    for it in range(max_iter):
        if prob.kkt(x, gx) <= tol:
            return x, it, Termination.GRADIENT_TOL, history
        slack = 4.0 * EPS * abs(fy)
        for _ in range(80):
            z = np.maximum(y - t * gy, 0.0)
            d = z - y
            fz = prob.value(z)
            if fz <= fy + float(gy @ d) + float(d @ d) / (2.0 * t) + slack:
                break
            t *= 0.5
        else:
            if max_abs(d) <= 1e-12 * (1.0 + max_abs(y)):
                return x, it, Termination.STEP_TOL, history
            raise LineSearchError(
                "backtracking failed to find a decrease",
                {"iteration": it, "step": t, "objective": fx, "kkt": prob.kkt(x, gx)},
            )
        if fz > fx + 4.0 * EPS * abs(fx):
            # momentum overshot: restart from the last accepted point
            theta = 1.0
            y, fy, gy = x, fx, gx
            continue
        x_old = x
        decrease = fx - fz
        x, fx = z, fz
        gx = prob.grad(x)
        history.append(HistoryEntry(fx, t))
        if decrease <= tol_obj * max(1.0, abs(fx)) and max_abs(x - x_old) <= STALL_STEP * (1.0 + max_abs(x)):
            term = Termination.GRADIENT_TOL if prob.kkt(x, gx) <= tol else Termination.STEP_TOL
            return x, it + 1, term, history
        theta_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * theta * theta))
        y = np.maximum(x + ((theta - 1.0) / theta_next) * (x - x_old), 0.0)
        theta = theta_next
        fy = prob.value(y)
        if not math.isfinite(fy):
            y, fy = x, fx
            theta = 1.0
        gy = gx if y is x else prob.grad(y)
        t *= 1.25
    term = Termination.GRADIENT_TOL if prob.kkt(x, gx) <= tol else Termination.MAX_ITER
    return x, max_iter, term, history


_METHODS = {"spg": _spg, "fista": _fista}


def solve_prox(
    spec: ProblemSpec,
    edge_set: Sequence[tuple[int, int]] | None = None,
    w_init=None,
    *,
    max_iter: int = 20000,
    method: str = "spg",
    truncation: float | None = None,
) -> SolveReport:
    """Minimize the penalized cost over nonnegative weights on `edge_set`.

    `edge_set` defaults to the complete graph.  `w_init` may be an
    :class:`EdgeWeightVector` (its pairs must match) or an array aligned with
    the canonical (sorted) pairs.  Hitting `max_iter` is reported through
    ``termination``, not raised.
    """
    n = spec.n
    if n < 2:
        raise ValidationError("design needs n >= 2")
    pairs = _canonical_pairs(n, edge_set)
    if not support_connected(n, pairs):
        raise DisconnectedError("candidate edge set does not span a connected graph")
    if w_init is None:
        w = default_init(spec, pairs)
    else:
        if isinstance(w_init, EdgeWeightVector):
            lookup = dict(zip(w_init.pairs, w_init.w))
            w = np.array([lookup.get(p, 0.0) for p in pairs])
        else:
            w = np.asarray(w_init, dtype=float).copy()
            if w.shape != (len(pairs),):
                raise ValidationError("w_init does not match the edge set")
        if np.any(w < 0):
            raise ValidationError("initial weights must be nonnegative")
    if method not in _METHODS:
        raise ValidationError(f"unknown method {method!r}")
    prob = _EdgeProblem(spec, pairs)
    tol = spec.tol_grad * kkt_scale(spec)
    w, iters, term, history = _METHODS[method](prob, w, tol, spec.tol_obj, max_iter)
    return _finish(spec, pairs, w, iters, term, history, truncation, method=method)


def solve_gamma0(spec: ProblemSpec) -> SolveReport:
    """Closed-form optimum without sparsity penalty.

    Valid only while ``Q2^{1/2}`` has no positive off-diagonal entries; when
    it does, the sign constraint binds and :func:`solve_prox` is needed.
    """
    if spec.gamma != 0:
        raise ValidationError("solve_gamma0 requires gamma == 0")
    K = closed_form(spec)
    off = K - np.diag(np.diag(K))
    if off.max(initial=0.0) > 1e-9 * (1.0 + max_abs(K)):
        raise NotLaplacianError(
            "Q2^{1/2} has positive off-diagonal entries; the closed form is not a "
            "conductance matrix (use solve_prox)"
        )
    obj = eval_J(K, spec)
    trunc = default_truncation(K)
    return SolveReport(
        K_opt=K,
        objective=obj,
        iterations=0,
        termination=Termination.GRADIENT_TOL,
        history=(HistoryEntry(obj.total, 0.0),),
        nnz_offdiag=nnz_offdiag(K, trunc),
        truncation=trunc,
        W=spec.W,
        params={"method": "closed_form"},
    )


def polish_on_support(spec: ProblemSpec, support, *, max_iter: int = 20000) -> SolveReport:
    """Best conductances (no sparsity penalty) within a fixed topology."""
    pairs = _canonical_pairs(spec.n, [(e[0], e[1]) for e in support])
    if not support_connected(spec.n, pairs):
        raise DisconnectedError("support is not connected")
    return solve_prox(spec.with_(gamma=0.0), pairs, max_iter=max_iter)


def _norm(M, kind):
    if kind == "fro":
        return float(np.linalg.norm(M))
    if kind == "max":
        return max_abs(M)
    if kind == "2":
        return float(np.linalg.norm(M, 2))
    raise ValidationError(f"unknown norm {kind!r}")


def reweighted_l1(
    spec: ProblemSpec,
    delta: float | None = None,
    epsilon: float | None = None,
    max_outer: int = 20,
    *,
    reweight_diagonal: bool = False,
    norm: str = "fro",
    method: str = "spg",
    inner_max_iter: int = 20000,
    truncation: float | None = None,
) -> SolveReport:
    """Sparsity-promoting design by iteratively reweighted l1.

    The first pass uses unit weights; afterwards off-diagonal weights are
    reset to ``1 / (|K_prev_ij| + delta)``.  Diagonal weights stay at one
    unless `reweight_diagonal` is set.  Stops when the change in K (in the
    chosen `norm`) drops below `epsilon`, or after `max_outer` passes.

    Defaults: ``delta = 1e-3 max|K0|`` and ``epsilon = 1e-5 ||K0||_F`` with
    K0 the unpenalized closed form, so the loop is scale invariant.
    """
    n = spec.n
    if n < 2:
        raise ValidationError("design needs n >= 2")
    K0 = closed_form(spec)
    if delta is None:
        delta = 1e-3 * max_abs(K0)
    if epsilon is None:
        epsilon = 1e-5 * float(np.linalg.norm(K0))
    if not (delta > 0 and epsilon > 0):
        raise ValidationError("delta and epsilon must be positive")
    if max_outer < 1:
        raise ValidationError("max_outer must be at least 1")

    pairs = tuple(complete_pairs(n))
    W = np.ones((n, n))
    K_prev = np.zeros((n, n))
    w = None
    outer = []
    report = None
    outer_term = "max_outer"
    for mu in range(1, max_outer + 1):
        sub = spec.with_(W=W)
        try:
            report = solve_prox(sub, pairs, w, max_iter=inner_max_iter, method=method, truncation=truncation)
        except SolverError as exc:
            raise type(exc)(f"outer iteration {mu}: {exc}") from exc
        K = report.K_opt
        w = EdgeWeightVector.from_matrix(K, pairs)
        change = _norm(K - K_prev, norm)
        outer.append(
            OuterStep(mu, report.nnz_offdiag, change, report.iterations, report.termination.value,
                      report.objective.total)
        )
        if change < epsilon:
            outer_term = "converged"
            break
        K_prev = K
        W_new = 1.0 / (np.abs(K) + delta)
        if not reweight_diagonal:
            np.fill_diagonal(W_new, 1.0)
        W = W_new

    params = dict(report.params)
    params.update(delta=float(delta), epsilon=float(epsilon), norm=norm, max_outer=max_outer,
                  reweight_diagonal=reweight_diagonal)
    return SolveReport(
        K_opt=report.K_opt,
        objective=report.objective,
        iterations=sum(s.inner_iterations for s in outer),
        termination=report.termination,
        history=report.history,
        nnz_offdiag=report.nnz_offdiag,
        truncation=report.truncation,
        W=report.W,
        outer=tuple(outer),
        outer_termination=outer_term,
        params=params,
    )
