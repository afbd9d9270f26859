"""Unstructured stability radius from the transfer function ``Q (i w I - (J - R) Q)^{-1}``."""

from __future__ import annotations

import math

import numpy as np

from . import omega as om
from .linalg import solve_linear
from .system import DHSystem, PerturbationClass, RadiusResult, validate


def transfer_norm(sys: DHSystem, w: float) -> float:
    n = sys.n
    G = sys.Q @ solve_linear(1j * w * np.eye(n) - sys.A, np.eye(n, dtype=complex))
    return float(np.linalg.norm(G, 2))


def unstructured_radius(sys: DHSystem, *, grid_points=om.DEFAULT_GRID, interval=None,
                        refine_tol=1e-10) -> RadiusResult:
    """``r(J, R) = inf_w 1 / (sqrt(2) ||G(w)||)``.

    Returns a zero radius (with ``diagnostics["stable"] = False``) when
    `sys` is not asymptotically stable.
    """
    rep = validate(sys)
    if not rep.asymptotically_stable:
        return RadiusResult(0.0, PerturbationClass.UNSTRUCTURED, 0.0,
                            diagnostics={"stable": False, "spectral_abscissa": rep.spectral_abscissa})
    res = om.search(sys, lambda w: 1.0 / transfer_norm(sys, w), grid_points=grid_points,
                    interval=interval, refine_tol=refine_tol)
    return RadiusResult(
        value=res.value / math.sqrt(2.0),
        kind=PerturbationClass.UNSTRUCTURED,
        omega_star=res.omega,
        diagnostics={"stable": True, "evaluations": res.evaluations, "failures": res.failures},
    )
