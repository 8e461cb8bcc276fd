"""Compare the reduced cost with the full second-order Lyapunov model on
random networks and report the worst relative gap per inductance."""
import argparse

import numpy as np

from syncnet.laplacian import weights_to_matrix
from syncnet.linalg import consensus_projector
from syncnet.objective import ProblemSpec, eval_full_lyapunov_oracle, eval_J


def random_instance(rng, n):
    tree = {(int(rng.integers(k)), k) for k in range(1, n)}
    extra = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5}
    pairs = sorted(tree | extra)
    K = weights_to_matrix(n, pairs, rng.uniform(0.1, 2.0, len(pairs)))
    G = rng.standard_normal((n, n + 2))
    P = consensus_projector(n)
    return K, P @ G @ G.T @ P


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    worst = {L: 0.0 for L in (0.1, 0.5, 1.0, 2.0, 10.0)}
    for _ in range(args.trials):
        n = int(rng.integers(2, args.max_n + 1))
        K, Q2 = random_instance(rng, n)
        spec = ProblemSpec(0.5 * (Q2 + Q2.T), r=float(10 ** rng.uniform(-2, 2)))
        h2 = eval_J(K, spec).h2_part
        for L in worst:
            worst[L] = max(worst[L], abs(eval_full_lyapunov_oracle(K, L, spec) - h2) / h2)
    for L, gap in worst.items():
        print(f"L={L:<5g} worst relative gap {gap:.2e}")


if __name__ == "__main__":
    main()
