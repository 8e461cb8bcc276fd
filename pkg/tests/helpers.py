"""Random instance generators and shared state for the test suite."""

from syncnet.laplacian import weights_to_matrix
from syncnet.linalg import consensus_projector

# lines collected by test_acceptance, echoed once at the end of the run
ACCEPTANCE_LINES: list[str] = []


def random_laplacian(rng, n, density=0.6, low=0.1, high=2.0):
    """Connected weighted Laplacian: a random spanning tree plus extra edges."""
    perm = rng.permutation(n)
    pairs, w = [], []
    for k in range(1, n):
        pairs.append((perm[k], perm[rng.integers(k)]))
        w.append(rng.uniform(low, high))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density and (i, j) not in pairs and (j, i) not in pairs:
                pairs.append((i, j))
                w.append(rng.uniform(low, high))
    return weights_to_matrix(n, pairs, w)


def random_q2(rng, n, scale=1.0):
    """PSD with Q 1 = 0 and positive definite on the complement of ones."""
    G = rng.standard_normal((n, n + 2))
    P = consensus_projector(n)
    Q = scale * P @ G @ G.T @ P / n
    return 0.5 * (Q + Q.T)


def feasible_q2(rng, n, r=1.0):
    """Q2 = r Kc^2 with Kc a complete-graph Laplacian, so Q2^{1/2}/sqrt(r) = Kc
    is itself a conductance matrix."""
    Kc = random_laplacian(rng, n, density=1.0, low=0.5, high=1.5)
    Q = r * Kc @ Kc
    return 0.5 * (Q + Q.T), Kc
