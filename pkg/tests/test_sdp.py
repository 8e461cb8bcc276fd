import numpy as np
import pytest

from helpers import random_q2
from syncnet.objective import ProblemSpec, eval_J
from syncnet.sdp import (
    assemble_sdp,
    evaluate,
    pack_variables,
    read_sdpa,
    substitution_point,
    variable_layout,
    verify_substitution,
    write_sdpa,
)
from syncnet.solver import reweighted_l1, solve_gamma0, solve_prox

Q2_EDGE = np.array([[1.0, -1.0], [-1.0, 1.0]])


def test_dimensions_n2():
    data = assemble_sdp(ProblemSpec(Q2_EDGE))
    assert data.lmi_size == 4
    assert data.n_equalities == 2
    assert data.n_sign_constraints == 2
    assert data.n_vars == 9
    np.testing.assert_array_equal(data.M, np.ones((2, 2)) - np.eye(2))


@pytest.mark.parametrize("n", [3, 5])
def test_dimensions_general(n, rng):
    data = assemble_sdp(ProblemSpec(random_q2(rng, n)))
    m = n * (n + 1) // 2
    assert data.n_vars == 3 * m
    assert -data.block_sizes[1] == n * (n - 1) + 2 * n + 2 * m
    assert len(set(variable_layout(n).values())) == data.n_vars


def test_objective_coefficients():
    spec = ProblemSpec(Q2_EDGE, r=3.0, gamma=0.5)
    data = assemble_sdp(spec)
    idx = variable_layout(2)
    assert data.c[idx[("K", 0, 0)]] == 1.5
    assert data.c[idx[("K", 0, 1)]] == 0.0
    assert data.c[idx[("X", 1, 1)]] == 0.5
    assert data.c[idx[("Y", 0, 0)]] == 0.5
    assert data.c[idx[("Y", 0, 1)]] == 1.0


def test_closed_form_is_feasible():
    spec = ProblemSpec(Q2_EDGE)
    K = solve_gamma0(spec).K_opt
    v = verify_substitution(K, spec)
    assert v["max_violation"] <= 1e-12
    assert v["sdp_objective"] == pytest.approx(np.sqrt(2), rel=1e-12)


@pytest.mark.parametrize("gamma", [0.0, 0.05, 0.5])
def test_substitution_random(rng, gamma):
    n = 6
    A = rng.uniform(0.2, 2.0, (n, n))
    spec = ProblemSpec(random_q2(rng, n), r=0.5, gamma=gamma, W=(A + A.T) / 2)
    K = solve_prox(spec).K_opt
    v = verify_substitution(K, spec)
    assert v["max_violation"] <= 1e-7
    assert v["objective_rel_gap"] <= 1e-7


def test_lmi_is_tight_at_substitution(rng):
    """With X = S (K + J)^{-1} S the Schur complement vanishes, so the LMI
    is singular: the point sits on the boundary, where the minimum lives."""
    spec = ProblemSpec(random_q2(rng, 4))
    data = assemble_sdp(spec)
    x = pack_variables(data, *substitution_point(solve_prox(spec).K_opt, spec))
    assert abs(evaluate(data, x).lmi_min_eig) <= 1e-10


def test_detects_violations(rng):
    spec = ProblemSpec(random_q2(rng, 4), gamma=0.1)
    data = assemble_sdp(spec)
    K, X, Y = substitution_point(solve_prox(spec).K_opt, spec)
    # shrinking X breaks the LMI, shrinking Y breaks the epigraph
    assert evaluate(data, pack_variables(data, K, 0.9 * X, Y)).lmi_min_eig < -1e-6
    assert evaluate(data, pack_variables(data, K, X, 0.5 * Y)).lp_min < -1e-6
    # a positive coupling breaks the sign rows, a bad diagonal the row sums
    Kp = K.copy()
    Kp[0, 1] = Kp[1, 0] = 0.1
    assert evaluate(data, pack_variables(data, Kp, X, np.abs(spec.W * Kp))).lp_min < 0
    Kd = K + 0.1 * np.eye(4)
    chk = evaluate(data, pack_variables(data, Kd, X, np.abs(spec.W * Kd)))
    assert chk.lp_min <= -0.1 + 1e-12


def test_objective_matches_design_cost(path7_spec):
    spec = path7_spec.with_(gamma=0.1)
    rep = reweighted_l1(spec)
    spec_w = spec.with_(W=rep.W)
    v = verify_substitution(rep.K_opt, spec_w)
    assert v["design_objective"] == eval_J(rep.K_opt, spec_w).total
    assert v["objective_rel_gap"] <= 1e-12


def test_sdpa_roundtrip(tmp_path, rng):
    spec = ProblemSpec(random_q2(rng, 3), r=2.0, gamma=0.25)
    data = assemble_sdp(spec)
    p = tmp_path / "p.dat-s"
    write_sdpa(data, p)
    c, sizes, entries = read_sdpa(p)
    assert sizes == data.block_sizes
    np.testing.assert_array_equal(c, data.c)
    assert entries == data.entries
    head = p.read_text().splitlines()
    assert head[0].startswith('"')
    assert head[1:4] == [str(data.n_vars), "2", f"6 {data.block_sizes[1]}"]


def test_sdpa_header_n2(tmp_path):
    p = tmp_path / "p.dat-s"
    write_sdpa(assemble_sdp(ProblemSpec(Q2_EDGE)), p)
    assert p.read_text().splitlines()[3].split()[0] == "4"

