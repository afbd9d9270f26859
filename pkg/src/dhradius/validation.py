"""Input coercion shared by the estimator wrappers and the CLI."""

from __future__ import annotations

import numpy as np

from .exceptions import NonSquareError
from .linalg import as_cmatrix
from .system import DHSystem


def check_square_matrix(A, name="A") -> np.ndarray:
    A = as_cmatrix(A, name)
    if A.shape[0] != A.shape[1]:
        raise NonSquareError(f"{name} must be square, got shape {A.shape}")
    return A


def as_system(obj) -> DHSystem:
    """Coerce a :class:`DHSystem`, a ``(J, R)`` / ``(J, R, Q)`` tuple or a mapping."""
    if isinstance(obj, DHSystem):
        return obj
    if isinstance(obj, dict):
        return DHSystem(obj["J"], obj["R"], obj.get("Q"))
    if isinstance(obj, (tuple, list)) and len(obj) in (2, 3):
        return DHSystem(*obj)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a DH system")


def check_vectors(x, n: int, name="x") -> np.ndarray:
    """Columns of a ``(n, k)`` array, or a single length-`n` vector as ``(n, 1)``."""
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2 or x.shape[0] != n:
        raise ValueError(f"{name} must have {n} rows, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return x
