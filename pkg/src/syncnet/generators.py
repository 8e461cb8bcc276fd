"""Built-in state weights ``Q2``."""
from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .laplacian import path_laplacian


def path(n: int) -> np.ndarray:
    """Laplacian of the unit-weight path on n nodes (the chain penalty
    ``sum_i (v_i - v_{i+1})^2``)."""
    if n < 2:
        raise ValidationError("path(n) needs n >= 2")
    return path_laplacian(n)


def projector(n: int, scale: float = 1.0) -> np.ndarray:
    """``scale * (I - 11^T/n)``: equal penalty on every pairwise difference."""
    if n < 2:
        raise ValidationError("projector(n) needs n >= 2")
    return scale * (np.eye(n) - np.full((n, n), 1.0 / n))


GENERATORS = {"path": path, "projector": projector}


def from_name(text: str) -> np.ndarray:
    """Parse ``gen:NAME:n`` (optionally ``gen:NAME:n:scale``)."""
    parts = text.split(":")
    if len(parts) < 3 or parts[0] != "gen":
        raise ValidationError(f"expected gen:NAME:n, got {text!r}")
    name = parts[1]
    if name not in GENERATORS:
        raise ValidationError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}")
    try:
        n = int(parts[2])
        extra = [float(p) for p in parts[3:]]
    except ValueError as exc:
        raise ValidationError(f"bad generator arguments in {text!r}") from exc
    return GENERATORS[name](n, *extra)
