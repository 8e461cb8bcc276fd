"""Command-line front end.

    syncnet design     --q2 gen:path:7 --gamma 0.1 --out run/
    syncnet eval       --K run/K.txt --q2 gen:path:7 --oracle
    syncnet sweep      --q2 gen:path:7 --gamma 0 --gamma 0.01 --gamma 0.1 --out sweep/
    syncnet check      --K run/K.txt
    syncnet export-sdp --q2 gen:path:7 --gamma 0.1 --out sdp/

Exit codes: 0 success, 2 validation failure, 3 solver failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import generators, textio
from .errors import SolverError, SyncNetError, ValidationError
from .laplacian import check_membership, from_matrix, to_matrix
from .objective import ORACLE_MAX_N, ProblemSpec, eval_J, eval_full_lyapunov_oracle
from .sdp import assemble_sdp, verify_substitution, write_sdpa
from .solver import Termination, reweighted_l1

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_IO = 4


@dataclass
class RunConfig:
    command: str
    q2: str | None = None
    K: str | None = None
    graph: str | None = None
    W: str | None = None
    r: float = 1.0
    gammas: list[float] = field(default_factory=lambda: [0.0])
    delta: float | None = None
    epsilon: float | None = None
    max_outer: int = 20
    trunc: float | None = None
    out: str = "."
    oracle: bool = False
    inductances: list[float] = field(default_factory=lambda: [1.0])
    offdiag_only_l1: bool = False
    reweight_diagonal: bool = False
    method: str = "spg"
    save_k: bool = False
    jobs: int = 1

    def __post_init__(self):
        for name in ("delta", "epsilon", "trunc"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValidationError(f"--{name} must be positive")
        if not self.r > 0:
            raise ValidationError("--r must be positive")
        if any(g < 0 for g in self.gammas):
            raise ValidationError("--gamma must be nonnegative")
        if not self.gammas:
            raise ValidationError("at least one --gamma is required")
        if self.max_outer < 1 or self.jobs < 1:
            raise ValidationError("--max-outer and --jobs must be at least 1")


def load_q2(source: str) -> np.ndarray:
    if source.startswith("gen:"):
        return generators.from_name(source)
    return textio.read_matrix(source)


def build_spec(cfg: RunConfig, gamma: float) -> ProblemSpec:
    if cfg.q2 is None:
        raise ValidationError("--q2 is required")
    Q2 = load_q2(cfg.q2)
    W = textio.read_matrix(cfg.W) if cfg.W else None
    return ProblemSpec(Q2, r=cfg.r, gamma=gamma, W=W, offdiag_only_l1=cfg.offdiag_only_l1)


def _design(cfg: RunConfig, gamma: float):
    spec = build_spec(cfg, gamma)
    rep = reweighted_l1(
        spec, cfg.delta, cfg.epsilon, cfg.max_outer,
        reweight_diagonal=cfg.reweight_diagonal, method=cfg.method, truncation=cfg.trunc,
    )
    return spec, rep


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_design(cfg: RunConfig) -> int:
    if len(cfg.gammas) != 1:
        raise ValidationError("design takes exactly one --gamma (use sweep for several)")
    gamma = cfg.gammas[0]
    os.makedirs(cfg.out, exist_ok=True)
    try:
        spec, rep = _design(cfg, gamma)
    except SolverError as exc:
        _write_json(os.path.join(cfg.out, "report.json"),
                    {"gamma": gamma, "r": cfg.r, "q2": cfg.q2, "error": f"{type(exc).__name__}: {exc}"})
        raise
    summary = {"gamma": gamma, "r": cfg.r, "q2": cfg.q2, **rep.summary()}
    textio.write_matrix(os.path.join(cfg.out, "K.txt"), rep.K_opt)
    textio.write_matrix(os.path.join(cfg.out, "W.txt"), rep.W)
    graph = from_matrix(rep.K_opt, rep.truncation)
    textio.write_graph(os.path.join(cfg.out, "edges.txt"), graph,
                       comment=f"edges with |K_ij| > {rep.truncation:.3g}")
    _write_json(os.path.join(cfg.out, "report.json"), summary)
    print(f"total={rep.objective.total:.12g} h2_part={rep.objective.h2_part:.12g} "
          f"l1_part={rep.objective.l1_part:.12g} nnz_offdiag={rep.nnz_offdiag} "
          f"edges={len(graph.edges)} outer={len(rep.outer)} ({rep.outer_termination})")
    if rep.termination is Termination.MAX_ITER:
        print("inner solver hit its iteration limit", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_eval(cfg: RunConfig) -> int:
    if cfg.K is None:
        raise ValidationError("--K is required")
    K = textio.read_matrix(cfg.K)
    spec = build_spec(cfg, cfg.gammas[0])
    mem = check_membership(K)
    print(f"symmetric={mem.is_symmetric} row_sums_zero={mem.row_sums_zero} "
          f"offdiag_nonpositive={mem.offdiag_nonpositive} connected={mem.connected} "
          f"lambda2={mem.lambda2:.17g}")
    if not mem.connected:
        print("K is not the Laplacian of a connected graph", file=sys.stderr)
        return EXIT_VALIDATION
    val = eval_J(K, spec)
    print(f"h2_part={val.h2_part:.17g}")
    print(f"l1_part={val.l1_part:.17g}")
    print(f"total={val.total:.17g}")
    if cfg.oracle:
        if spec.n > ORACLE_MAX_N:
            print(f"oracle skipped: n > {ORACLE_MAX_N}")
        else:
            for L in cfg.inductances:
                o = eval_full_lyapunov_oracle(K, L, spec)
                gap = abs(o - val.h2_part) / max(abs(val.h2_part), 1e-300)
                print(f"oracle[L={L:g}]={o:.17g} rel_gap={gap:.3e}")
    return EXIT_OK


def _sweep_point(args):
    cfg, gamma = args
    try:
        spec, rep = _design(cfg, gamma)
    except SyncNetError as exc:
        return gamma, None, f"{type(exc).__name__}: {exc}"
    return gamma, rep, rep.termination.value if rep.termination is Termination.MAX_ITER else "ok"


def cmd_sweep(cfg: RunConfig) -> int:
    os.makedirs(cfg.out, exist_ok=True)
    tasks = [(cfg, g) for g in cfg.gammas]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            results = list(ex.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    rows = ["gamma\th2_part\tl1_part\tnnz_offdiag\touter_iterations\tstatus"]
    failed = False
    for k, (gamma, rep, status) in enumerate(results):
        if rep is None:
            failed = True
            rows.append(f"{textio.fmt(gamma)}\tnan\tnan\t-1\t0\t{status}")
            continue
        rows.append(
            f"{textio.fmt(gamma)}\t{textio.fmt(rep.objective.h2_part)}\t{textio.fmt(rep.objective.l1_part)}"
            f"\t{rep.nnz_offdiag}\t{len(rep.outer)}\t{status}"
        )
        if cfg.save_k:
            textio.write_matrix(os.path.join(cfg.out, f"K_{k:03d}.txt"), rep.K_opt,
                                comment=f"gamma = {textio.fmt(gamma)}")
    with open(os.path.join(cfg.out, "sweep.tsv"), "w") as fh:
        fh.write("\n".join(rows) + "\n")
    print("\n".join(rows))
    return EXIT_SOLVER if failed else EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    if cfg.K:
        K = textio.read_matrix(cfg.K)
    elif cfg.graph:
        K = to_matrix(textio.read_graph(cfg.graph))
    else:
        raise ValidationError("--K or --graph is required")
    mem = check_membership(K, cfg.trunc)
    print(f"symmetric={mem.is_symmetric}")
    print(f"row_sums_zero={mem.row_sums_zero}")
    print(f"offdiag_nonpositive={mem.offdiag_nonpositive}")
    print(f"connected={mem.connected}")
    print(f"lambda2={mem.lambda2:.17g}")
    return EXIT_OK if mem.ok else EXIT_VALIDATION


def cmd_export_sdp(cfg: RunConfig) -> int:
    if len(cfg.gammas) != 1:
        raise ValidationError("export-sdp takes exactly one --gamma")
    gamma = cfg.gammas[0]
    os.makedirs(cfg.out, exist_ok=True)
    if cfg.K:
        spec = build_spec(cfg, gamma)
        K = textio.read_matrix(cfg.K)
    else:
        spec, rep = _design(cfg, gamma)
        spec = spec.with_(W=rep.W)
        K = rep.K_opt
    data = assemble_sdp(spec)
    path = os.path.join(cfg.out, "problem.dat-s")
    write_sdpa(data, path)
    ver = verify_substitution(K, spec, data)
    ver.update(lmi_block=data.lmi_size, lp_rows=-data.block_sizes[1], n_vars=data.n_vars)
    _write_json(os.path.join(cfg.out, "verify.json"), ver)
    print(f"wrote {path}: {data.n_vars} variables, blocks {data.block_sizes[0]} {data.block_sizes[1]}")
    print(f"substitution: max_violation={ver['max_violation']:.3e} "
          f"objective_rel_gap={ver['objective_rel_gap']:.3e}")
    return EXIT_OK


COMMANDS = {
    "design": cmd_design,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "check": cmd_check,
    "export-sdp": cmd_export_sdp,
}


def _gamma_list(values):
    out = []
    for v in values or []:
        for tok in str(v).split(","):
            tok = tok.strip()
            if tok:
                out.append(float(tok))
    return out


def make_parser() -> argparse.ArgumentParser:
    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument("--q2", help="Q2 matrix file or gen:NAME:n (path, projector)")
    problem.add_argument("--W", help="l1 weight matrix file")
    problem.add_argument("--r", type=float, default=1.0, help="control effort weight (default 1)")
    problem.add_argument("--gamma", action="append", help="sparsity weight; repeatable or comma separated")
    problem.add_argument("--offdiag-only-l1", action="store_true", help="leave the diagonal out of the l1 term")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--delta", type=float, help="reweighting offset (default 1e-3 max|K0|)")
    solver.add_argument("--epsilon", type=float, help="outer stopping tolerance (default 1e-5 ||K0||_F)")
    solver.add_argument("--max-outer", type=int, default=20)
    solver.add_argument("--reweight-diagonal", action="store_true")
    solver.add_argument("--method", choices=("spg", "fista"), default="spg", help="inner solver")

    trunc = argparse.ArgumentParser(add_help=False)
    trunc.add_argument("--trunc", type=float, help="threshold below which |K_ij| counts as zero")
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", default=".", help="output directory")
    kfile = argparse.ArgumentParser(add_help=False)
    kfile.add_argument("--K", help="conductance matrix file")

    p = argparse.ArgumentParser(prog="syncnet", description="Sparse conductance network design.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("design", parents=[problem, solver, trunc, out], help="optimize one network")
    s = sub.add_parser("eval", parents=[problem, kfile], help="evaluate the cost of a given K")
    s.add_argument("--oracle", action="store_true", help="cross-check with the full Lyapunov model")
    s.add_argument("--L", type=float, action="append", dest="inductances", metavar="L",
                   help="inductance for the oracle check; repeatable")
    s = sub.add_parser("sweep", parents=[problem, solver, trunc, out], help="optimize over a gamma grid")
    s.add_argument("--save-k", action="store_true", help="also write K_###.txt per gamma")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s = sub.add_parser("check", parents=[kfile, trunc], help="test Laplacian membership")
    s.add_argument("--graph", help="edge-list file")
    sub.add_parser("export-sdp", parents=[problem, solver, trunc, out, kfile],
                   help="write the SDP in SDPA format and verify a point")
    return p


def config_from_args(ns) -> RunConfig:
    opts = {k: v for k, v in vars(ns).items() if v is not None}
    gamma = opts.pop("gamma", None)
    if gamma is not None:
        opts["gammas"] = _gamma_list(gamma)
    return RunConfig(**opts)


def main(argv=None) -> int:
    parser = make_parser()
    ns = parser.parse_args(argv)
    try:
        if getattr(ns, "gamma", None) is not None and not _gamma_list(ns.gamma):
            parser.error("empty --gamma list")
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except textio.FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # ValidationError and bad float literals
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
