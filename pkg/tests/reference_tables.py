"""Published two-decimal conductance matrices for the 7-node path example
(Q2 = path Laplacian, r = 1)."""
import numpy as np

K0 = np.array([
    [0.84, -0.52, -0.13, -0.07, -0.05, -0.04, -0.03],
    [-0.52, 1.23, -0.46, -0.11, -0.06, -0.04, -0.04],
    [-0.13, -0.46, 1.25, -0.45, -0.11, -0.06, -0.05],
    [-0.07, -0.11, -0.45, 1.25, -0.45, -0.11, -0.07],
    [-0.05, -0.06, -0.11, -0.45, 1.25, -0.46, -0.13],
    [-0.04, -0.04, -0.06, -0.11, -0.46, 1.23, -0.52],
    [-0.03, -0.04, -0.05, -0.07, -0.13, -0.52, 0.84],
])

K001 = np.array([
    [0.80, -0.55, -0.14, 0, 0, 0, -0.11],
    [-0.55, 1.19, -0.47, -0.17, 0, 0, 0],
    [-0.14, -0.47, 1.22, -0.45, -0.16, 0, 0],
    [0, -0.17, -0.45, 1.24, -0.45, -0.17, 0],
    [0, 0, -0.16, -0.45, 1.22, -0.47, -0.14],
    [0, 0, 0, -0.17, -0.47, 1.19, -0.55],
    [-0.11, 0, 0, 0, -0.14, -0.55, 0.80],
])

K01 = np.array([
    [0.57, -0.57, 0, 0, 0, 0, 0],
    [-0.57, 1.14, -0.57, 0, 0, 0, 0],
    [0, -0.57, 1.14, -0.57, 0, 0, 0],
    [0, 0, -0.57, 1.14, -0.57, 0, 0],
    [0, 0, 0, -0.57, 1.14, -0.57, 0],
    [0, 0, 0, 0, -0.57, 1.14, -0.57],
    [0, 0, 0, 0, 0, -0.57, 0.57],
])


def zero_offdiag(K):
    """Boolean mask of off-diagonal positions printed as 0."""
    Z = np.asarray(K) == 0
    np.fill_diagonal(Z, False)
    return Z
