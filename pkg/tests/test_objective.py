import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_laplacian, random_q2
from syncnet.errors import (
    DimensionError,
    DisconnectedError,
    NotLaplacianError,
    NotPSDError,
    ValidationError,
)
from syncnet.laplacian import complete_pairs, path_laplacian, weights_to_matrix
from syncnet.linalg import consensus_projector, sqrt_psd
from syncnet.objective import (
    ProblemSpec,
    check_lyapunov_blocks,
    edge_directional,
    eval_full_lyapunov_oracle,
    eval_J,
    grad_J,
    lyapunov_blocks,
)

Q2_EDGE = np.array([[1.0, -1.0], [-1.0, 1.0]])


# -- ProblemSpec -------------------------------------------------------------

def test_spec_derives_n_and_defaults():
    spec = ProblemSpec(path_laplacian(4))
    assert spec.n == 4
    np.testing.assert_array_equal(spec.W, np.ones((4, 4)))
    assert spec.W_eff is spec.W


def test_spec_offdiag_weights():
    spec = ProblemSpec(path_laplacian(3), offdiag_only_l1=True)
    assert np.all(np.diag(spec.W_eff) == 0)
    assert np.all(spec.W_eff[~np.eye(3, dtype=bool)] == 1)


@pytest.mark.parametrize(
    "kwargs, err",
    [
        (dict(Q2=np.eye(3)), NotLaplacianError),
        (dict(Q2=np.zeros((3, 3))), NotPSDError),
        (dict(Q2=-path_laplacian(3)), NotPSDError),
        (dict(Q2=path_laplacian(3), r=0.0), ValidationError),
        (dict(Q2=path_laplacian(3), gamma=-1.0), ValidationError),
        (dict(Q2=path_laplacian(3), W=-np.ones((3, 3))), ValidationError),
        (dict(Q2=path_laplacian(3), W=np.ones((2, 2))), DimensionError),
    ],
)
def test_spec_validation(kwargs, err):
    with pytest.raises(err):
        ProblemSpec(**kwargs)


def test_spec_with_revalidates():
    spec = ProblemSpec(path_laplacian(3))
    assert spec.with_(gamma=0.5).gamma == 0.5
    with pytest.raises(ValidationError):
        spec.with_(r=-1.0)


# -- eval_J ------------------------------------------------------------------

def test_eval_edge_closed_form():
    spec = ProblemSpec(Q2_EDGE)
    v = eval_J(sqrt_psd(Q2_EDGE), spec)
    assert v.total == pytest.approx(np.sqrt(2), rel=1e-14)
    assert v.l1_part == 0.0


@pytest.mark.parametrize("n, k, r", [(3, 0.7, 1.0), (5, 2.0, 0.1), (8, 1.3, 10.0)])
def test_eval_all_to_all(rng, n, k, r):
    Q2 = random_q2(rng, n)
    v = eval_J(k * consensus_projector(n), ProblemSpec(Q2, r=r))
    assert 2 * v.total == pytest.approx(np.trace(Q2) / k + r * k * (n - 1), rel=1e-13)


def test_eval_l1_part():
    spec = ProblemSpec(Q2_EDGE, gamma=1.0, W=np.ones((2, 2)))
    v = eval_J(Q2_EDGE, spec)
    assert v.l1_part == 4.0
    assert v.total == v.h2_part + v.l1_part
    assert eval_J(Q2_EDGE, spec.with_(offdiag_only_l1=True)).l1_part == 2.0


def test_eval_rejects():
    spec = ProblemSpec(path_laplacian(4))
    with pytest.raises(DisconnectedError):
        eval_J(weights_to_matrix(4, [(0, 1), (2, 3)], [1.0, 1.0]), spec)
    with pytest.raises(NotLaplacianError):
        eval_J(np.eye(4), spec)
    with pytest.raises(DimensionError):
        eval_J(path_laplacian(3), spec)


def test_convexity(rng):
    for _ in range(20):
        n = int(rng.integers(2, 8))
        spec = ProblemSpec(random_q2(rng, n), r=float(rng.choice([0.1, 1, 10])), gamma=0.1)
        Ka, Kb = random_laplacian(rng, n), random_laplacian(rng, n)
        Ja, Jb = eval_J(Ka, spec).total, eval_J(Kb, spec).total
        for t in (0.25, 0.5, 0.75):
            assert eval_J(t * Ka + (1 - t) * Kb, spec).total <= t * Ja + (1 - t) * Jb + 1e-9


def test_blowup_near_disconnection():
    n = 6
    spec = ProblemSpec(path_laplacian(n))
    vals = []
    for w in (1.0, 1e-2, 1e-4, 1e-6):
        weights = np.ones(n - 1)
        weights[2] = w  # the bridge between the two halves
        vals.append(eval_J(weights_to_matrix(n, [(i, i + 1) for i in range(n - 1)], weights), spec).h2_part)
    assert all(b > a for a, b in zip(vals, vals[1:]))
    # effective resistance of a tree edge is 1/w
    assert vals[-1] == pytest.approx(0.5e6, rel=1e-4)


# -- grad_J --------------------------------------------------------------------

def test_grad_vanishes_at_closed_form(rng):
    for r in (0.1, 1.0, 10.0):
        Q2 = random_q2(rng, 6)
        K = sqrt_psd(Q2) / np.sqrt(r)
        G = grad_J(K, ProblemSpec(Q2, r=r))
        assert np.abs(G).max() <= 1e-8 * (1 + np.abs(Q2).max())


def test_grad_edge_example():
    # K = Q2 for the single edge: M = (Q2 + J)^{-1} has M Q2 M = Q2/4
    G = grad_J(Q2_EDGE, ProblemSpec(Q2_EDGE))
    np.testing.assert_allclose(G, -Q2_EDGE / 8 + consensus_projector(2) / 2, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_grad_symmetric_tangent(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    G = grad_J(random_laplacian(rng, n), ProblemSpec(random_q2(rng, n), r=float(rng.uniform(0.1, 10))))
    assert np.array_equal(G, G.T)
    assert np.abs(G @ np.ones(n)).max() <= 1e-8 * (1 + np.abs(G).max())


def fd_edge_gradient(K, spec, pairs, h=1e-5):
    out = []
    for i, j in pairs:
        B = weights_to_matrix(spec.n, [(i, j)], [1.0])
        out.append((eval_J(K + h * B, spec).h2_part - eval_J(K - h * B, spec).h2_part) / (2 * h))
    return np.array(out)


@pytest.mark.parametrize("seed", range(5))
def test_grad_finite_differences(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    spec = ProblemSpec(random_q2(rng, n), r=float(rng.choice([0.1, 1.0, 10.0])))
    K = random_laplacian(rng, n, low=0.5)
    pairs = complete_pairs(n)
    g = edge_directional(grad_J(K, spec), pairs)
    fd = fd_edge_gradient(K, spec, pairs)
    np.testing.assert_allclose(g, fd, rtol=1e-5, atol=1e-9)


# -- Lyapunov oracle -----------------------------------------------------------

@pytest.mark.parametrize("L", [0.5, 1.0, 2.0])
def test_oracle_edge(L):
    spec = ProblemSpec(Q2_EDGE)
    assert eval_full_lyapunov_oracle(sqrt_psd(Q2_EDGE), L, spec) == pytest.approx(np.sqrt(2), rel=1e-12)


def test_oracle_all_to_all():
    n = 3
    Q2 = 2 * consensus_projector(n)
    k = np.sqrt(np.trace(Q2) / (n - 1))
    val = eval_full_lyapunov_oracle(k * consensus_projector(n), 1.0, ProblemSpec(Q2))
    assert val == pytest.approx(0.5 * (np.trace(Q2) / k + 2 * k), rel=1e-12)


def test_oracle_small_r_limit(rng):
    n = 5
    Q2 = random_q2(rng, n)
    spec = ProblemSpec(Q2, r=1e-12)
    K = consensus_projector(n)
    val = eval_full_lyapunov_oracle(K, 1.0, spec)
    assert val == pytest.approx(eval_J(K, spec).h2_part, rel=1e-6)
    assert val == pytest.approx(0.5 * np.trace(Q2 @ np.linalg.pinv(K)), rel=1e-6)


def test_oracle_limits(rng):
    with pytest.raises(DimensionError):
        eval_full_lyapunov_oracle(path_laplacian(17), 1.0, ProblemSpec(path_laplacian(17)))
    with pytest.raises(ValidationError):
        eval_full_lyapunov_oracle(path_laplacian(3), 0.0, ProblemSpec(path_laplacian(3)))


@pytest.mark.parametrize("seed", range(6))
def test_oracle_matches_eval(seed):
    rng = np.random.default_rng(300 + seed)
    n = int(rng.integers(2, 9))
    spec = ProblemSpec(random_q2(rng, n), r=float(rng.choice([0.1, 1.0, 10.0])))
    K = random_laplacian(rng, n)
    h2 = eval_J(K, spec).h2_part
    for L in (0.5, 1.0, 2.0):
        assert eval_full_lyapunov_oracle(K, L, spec) == pytest.approx(h2, rel=1e-7)


# -- block equations -------------------------------------------------------------

@pytest.mark.parametrize("L", [0.5, 1.0, 3.0])
def test_blocks_satisfy_equations(rng, L):
    K = random_laplacian(rng, 3)
    spec = ProblemSpec(random_q2(rng, 3), r=0.7)
    res = check_lyapunov_blocks(*lyapunov_blocks(K, L, spec), K, L, spec)
    assert max(res) <= 1e-8


def test_blocks_trace_is_h2(rng):
    K = random_laplacian(rng, 6)
    spec = ProblemSpec(random_q2(rng, 6), r=2.0)
    _, _, P2 = lyapunov_blocks(K, 1.0, spec)
    assert np.trace(P2) == pytest.approx(eval_J(K, spec).h2_part, rel=1e-10)


def test_blocks_detect_perturbation(rng):
    n = 4
    K = random_laplacian(rng, n)
    spec = ProblemSpec(random_q2(rng, n))
    P0, P1, P2 = lyapunov_blocks(K, 1.0, spec)
    res = check_lyapunov_blocks(P0, P1, P2 + 0.1 * consensus_projector(n), K, 1.0, spec)
    # K P_perp = K, so the third residual becomes 0.2 K
    assert res.third == pytest.approx(0.2 * np.abs(K).max(), rel=1e-8)
    assert res.first == 0.0


def test_blocks_trivial_network():
    spec = ProblemSpec(np.zeros((1, 1)))
    K = np.zeros((1, 1))
    res = check_lyapunov_blocks(*lyapunov_blocks(K, 1.0, spec), K, 1.0, spec)
    assert res == (0.0, 0.0, 0.0)
