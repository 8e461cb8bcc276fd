"""Plain-text matrix and graph files.

Matrix file: header ``n n``, then n rows of n numbers.  Graph file: header
``n <nodes>``, then one ``i j w`` line per edge (0-based).  Both accept
``#`` comments and blank lines.  Floats are written as their shortest
round-trip repr, so a write/read cycle is lossless.
"""
from __future__ import annotations

import numpy as np

from .errors import SyncNetError, ValidationError
from .laplacian import LaplacianCandidate


class FormatError(SyncNetError, OSError):
    """Unreadable or malformed input file."""


def _content_lines(path):
    try:
        with open(path) as fh:
            raw = fh.readlines()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    out = []
    for ln in raw:
        ln = ln.split("#", 1)[0].strip()
        if ln:
            out.append(ln)
    return out


def fmt(v: float) -> str:
    return repr(float(v))


def write_matrix(path, A, comment: str | None = None) -> None:
    A = np.asarray(A, dtype=float)
    with open(path, "w") as fh:
        if comment:
            for ln in comment.splitlines():
                fh.write(f"# {ln}\n")
        fh.write(f"{A.shape[0]} {A.shape[1]}\n")
        for row in A:
            fh.write(" ".join(fmt(v) for v in row) + "\n")


def read_matrix(path) -> np.ndarray:
    lines = _content_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty matrix file")
    try:
        head = [int(t) for t in lines[0].split()]
        rows = [[float(t) for t in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if len(head) != 2 or head[0] != head[1]:
        raise FormatError(f"{path}: header must be 'n n'")
    n = head[0]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise FormatError(f"{path}: expected {n} rows of {n} values")
    return np.array(rows, dtype=float).reshape(n, n)


def write_graph(path, c: LaplacianCandidate, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        if comment:
            for ln in comment.splitlines():
                fh.write(f"# {ln}\n")
        fh.write(f"n {c.n}\n")
        for i, j, w in c.edges:
            fh.write(f"{i} {j} {fmt(w)}\n")


def read_graph(path) -> LaplacianCandidate:
    lines = _content_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty graph file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n":
        raise FormatError(f"{path}: header must be 'n <count>'")
    try:
        n = int(head[1])
        edges = []
        for ln in lines[1:]:
            t = ln.split()
            if len(t) != 3:
                raise ValueError(f"bad edge line {ln!r}")
            edges.append((int(t[0]), int(t[1]), float(t[2])))
        return LaplacianCandidate(n, tuple(edges))
    except (ValueError, ValidationError) as exc:
        raise FormatError(f"{path}: {exc}") from exc
