"""Minimal spectral-norm structured maps sending a vector to a prescribed image."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import NoSuchMapError, ZeroVectorError
from .linalg import as_cvector, herm
from .system import RQ_ZERO_TOL


class MapStructure(enum.Enum):
    HERMITIAN = "hermitian"
    SKEW_HERMITIAN = "skew-hermitian"
    NEG_SEMIDEFINITE = "negative-semidefinite"


@dataclass(frozen=True, eq=False)
class MappingResult:
    map: np.ndarray
    attained_norm: float
    structure: MapStructure


FEAS_TOL = 1e-12
DEP_TOL = 1e-12


def _hermitian_map(x, y):
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if ny == 0.0:
        return np.zeros((x.size, x.size), dtype=complex)
    c = np.vdot(x, y) / nx**2
    if np.linalg.norm(y - c * x) <= DEP_TOL * ny:
        # y is a real multiple of x
        return herm(np.outer(y, x.conj()) / nx**2)
    xh, yh = x / nx, y / ny
    W = np.column_stack([yh, xh])
    t = np.vdot(xh, yh).real
    # inverse of [[t, 1], [1, t]]; |t| < 1 by independence
    core = np.array([[-t, 1.0], [1.0, -t]]) / (1.0 - t * t)
    return herm((ny / nx) * (W @ core @ W.conj().T))


def min_hermitian_map(x, y) -> MappingResult:
    """Hermitian ``H`` of least spectral norm with ``H x = y``.

    Such a map exists iff ``x^* y`` is real; its norm is ``||y|| / ||x||``.
    When `x` and `y` are linearly independent the minimizer is the rank-2
    matrix built on ``span{x, y}``; otherwise it is ``y x^* / (x^* x)``.

    Raises
    ------
    ZeroVectorError
        If `x` vanishes.
    NoSuchMapError
        If ``Im(x^* y)`` exceeds ``1e-12 ||x|| ||y||``.
    """
    x, y = as_cvector(x, "x"), as_cvector(y, "y")
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0.0:
        raise ZeroVectorError("x must be nonzero")
    if abs(np.vdot(x, y).imag) > FEAS_TOL * nx * ny:
        raise NoSuchMapError(f"Im(x^*y) = {np.vdot(x, y).imag:.3e}: no Hermitian map exists")
    return MappingResult(_hermitian_map(x, y), float(ny / nx), MapStructure.HERMITIAN)


def min_skew_hermitian_map(x, y) -> MappingResult:
    """Skew-Hermitian ``S`` of least norm with ``S x = y``; ``S = -i H(x, iy)``."""
    x, y = as_cvector(x, "x"), as_cvector(y, "y")
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0.0:
        raise ZeroVectorError("x must be nonzero")
    if abs(np.vdot(x, y).real) > FEAS_TOL * nx * ny:
        raise NoSuchMapError(f"Re(x^*y) = {np.vdot(x, y).real:.3e}: no skew-Hermitian map exists")
    S = -1j * _hermitian_map(x, 1j * y)
    S = 0.5 * (S - S.conj().T)
    return MappingResult(S, float(ny / nx), MapStructure.SKEW_HERMITIAN)


def min_negsemidef_map(R, Q, x) -> MappingResult:
    """Negative semidefinite ``dR`` of least norm with ``dR Q x = -R Q x``.

    The minimizer is ``-(RQx)(RQx)^* / (x^* Q R Q x)`` with norm
    ``||RQx||^2 / (x^* Q R Q x)``; it is zero when ``RQx`` vanishes.
    ``R + dR`` stays positive semidefinite.
    """
    x = as_cvector(x, "x")
    if np.linalg.norm(x) == 0.0:
        raise ZeroVectorError("x must be nonzero")
    R = np.asarray(R, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    y = Q @ x
    r = R @ y
    den = np.vdot(y, r).real
    n = x.size
    if np.linalg.norm(r) ** 2 <= RQ_ZERO_TOL * np.linalg.norm(y) ** 2 or den <= RQ_ZERO_TOL * np.linalg.norm(y) ** 2:
        return MappingResult(np.zeros((n, n), dtype=complex), 0.0, MapStructure.NEG_SEMIDEFINITE)
    dR = herm(-np.outer(r, r.conj()) / den)
    return MappingResult(dR, float(np.vdot(r, r).real / den), MapStructure.NEG_SEMIDEFINITE)
