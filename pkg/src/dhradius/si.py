"""Stability radius for skew-Hermitian ``dJ`` and Hermitian ``dR`` keeping ``R + dR >= 0``."""

from __future__ import annotations

import numpy as np

from . import omega as om
from .linalg import EPS, smallest_singular, solve_linear
from .mappings import min_hermitian_map, min_skew_hermitian_map
from .system import (
    DHSystem,
    PerturbationClass,
    PerturbationPair,
    RadiusResult,
    is_member,
    validate,
    verify_certificate,
)

COND_EXPLICIT_INVERSE = 1e8


class _StackedPencil:
    """Evaluates ``G(w) Q^{-1}`` with ``G(w) = [RQ; i w I - JQ]``.

    ``G(w) Q^{-1} = [R; i w Q^{-1} - J]``; `Q^{-1}` is formed once for
    well-conditioned `Q` and otherwise applied by a solve per frequency.
    """

    def __init__(self, sys: DHSystem):
        self.sys = sys
        n = sys.n
        self._explicit = np.linalg.cond(sys.Q) <= COND_EXPLICIT_INVERSE
        self._Qinv = solve_linear(sys.Q, np.eye(n, dtype=complex)) if self._explicit else None

    def matrix(self, w: float) -> np.ndarray:
        sys = self.sys
        if self._explicit:
            bottom = 1j * w * self._Qinv - sys.J
        else:
            Gb = 1j * w * np.eye(sys.n) - sys.J @ sys.Q
            bottom = solve_linear(sys.Q, Gb.conj().T).conj().T
        return np.vstack([sys.R, bottom])


def stacked_pencil(sys: DHSystem, w: float) -> np.ndarray:
    """The ``2n x n`` matrix ``[RQ; i w I - JQ]`` (before the ``Q^{-1}`` factor)."""
    return np.vstack([sys.R @ sys.Q, 1j * w * np.eye(sys.n) - sys.J @ sys.Q])


def si_inner(sys: DHSystem, w: float, _pencil=None):
    """``sigma_min(G(w) Q^{-1})`` and its right singular vector ``y``."""
    pencil = _pencil or _StackedPencil(sys)
    return smallest_singular(pencil.matrix(w))


def r_is_definite(R) -> bool:
    w = np.linalg.eigvalsh(0.5 * (R + R.conj().T))
    return bool(w[0] > w.size * EPS * max(w[-1], 0.0))


def si_certificate(sys: DHSystem, w: float, y) -> PerturbationPair:
    """Optimal pair at frequency `w` from the singular vector `y` (``R > 0``)."""
    x = solve_linear(sys.Q, y.reshape(-1, 1)).ravel()
    Qx = sys.Q @ x
    dJ = min_skew_hermitian_map(Qx, (1j * w * np.eye(sys.n) - sys.J @ sys.Q) @ x).map
    dR = min_hermitian_map(Qx, -sys.R @ Qx).map
    return PerturbationPair(dJ, dR)


def si_radius(sys: DHSystem, *, grid_points=om.DEFAULT_GRID, interval=None,
              refine_tol=1e-10, certificate=True) -> RadiusResult:
    """``inf_w sigma_min(G(w) Q^{-1})``.

    The value equals the radius when `R` is positive definite; for
    singular `R` it is a lower bound (``is_exact`` False) and no
    certificate is produced.
    """
    rep = validate(sys)
    if not rep.asymptotically_stable:
        return RadiusResult(0.0, PerturbationClass.S_I, 0.0, is_exact=False,
                            diagnostics={"stable": False, "spectral_abscissa": rep.spectral_abscissa})
    pencil = _StackedPencil(sys)
    res = om.search(sys, lambda w: si_inner(sys, w, pencil)[0], grid_points=grid_points,
                    interval=interval, refine_tol=refine_tol)
    sigma, y = si_inner(sys, res.omega, pencil)
    exact = r_is_definite(sys.R)
    diag = {"stable": True, "evaluations": res.evaluations, "failures": res.failures,
            "branch": "exact" if exact else "lower-bound"}
    x = solve_linear(sys.Q, y.reshape(-1, 1)).ravel()
    x = x / np.linalg.norm(x)
    cert = None
    if exact and certificate:
        cert = si_certificate(sys, res.omega, y)
        check = verify_certificate(sys, cert, res.omega, x)
        check["member"] = is_member(check["class"], PerturbationClass.S_I)
        check["class"] = check["class"].value
        diag["certificate_check"] = check
    return RadiusResult(sigma, PerturbationClass.S_I, res.omega, x_star=x, certificate=cert,
                        is_exact=exact, diagnostics=diag)
