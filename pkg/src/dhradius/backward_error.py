"""Eigenvalue backward error for skew-Hermitian ``dJ`` and Hermitian ``dR``.

For a shift ``lambda`` that is not an eigenvalue of ``(J - R)Q`` put
``M = ((J - R)Q - lambda I)^{-1}``.  The backward error is

    eta(lambda) = (min_{t0, t1} lambda_max(H + t0 H0 + t1 H1))^{-1/2}

with the ``2n x 2n`` Hermitian blocks assembled by :func:`build_pencil`.
``g(t) = lambda_max(H + t0 H0 + t1 H1)`` is convex, so a simplex search
with a few restarts locates its minimum reliably.  The radius is the
infimum of ``eta(i w)`` over real ``w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import omega as om
from .exceptions import LambdaIsEigenvalue, SingularMatrixError
from .linalg import herm, solve_linear, spectral_norm
from .system import DHSystem, PerturbationClass, RadiusResult, validate

G_ZERO_TOL = 1e-12
COARSE = 5
MAX_RESTARTS = 8


@dataclass(eq=False)
class HermitianPencil:
    lam: complex
    M: np.ndarray
    H: np.ndarray
    H0: np.ndarray
    H1: np.ndarray

    def at(self, t0, t1) -> np.ndarray:
        return self.H + t0 * self.H0 + t1 * self.H1

    def g(self, t) -> float:
        """Largest eigenvalue of ``H + t0 H0 + t1 H1``."""
        return float(np.linalg.eigvalsh(self.at(t[0], t[1]))[-1])

    @property
    def scale(self) -> float:
        """``||H|| / max(||H0||, ||H1||)``, the natural size of the minimizer."""
        d = max(spectral_norm(self.H0), spectral_norm(self.H1))
        return spectral_norm(self.H) / d if d > 0 else 1.0


def build_pencil(sys: DHSystem, lam: complex) -> HermitianPencil:
    """Assemble ``M``, ``H``, ``H0`` and ``H1`` for the shift `lam`.

    ``H = [I -I]^* M^* Q^2 M [I -I]``,
    ``H0 = [[QM + M^*Q, -QM], [-M^*Q, 0]]`` and
    ``H1 = i [[0, -M^*Q], [QM, -QM + M^*Q]]``.

    Raises
    ------
    LambdaIsEigenvalue
        If ``(J - R)Q - lam I`` is numerically singular.
    """
    n = sys.n
    I = np.eye(n, dtype=complex)
    try:
        M = solve_linear(sys.A - lam * I, I)
    except SingularMatrixError as exc:
        raise LambdaIsEigenvalue(f"lambda = {lam} is an eigenvalue of (J - R)Q") from exc
    Q = sys.Q
    QM = Q @ M
    MQ = QM.conj().T
    E = np.hstack([I, -I])
    H = E.conj().T @ (QM.conj().T @ QM) @ E
    Z = np.zeros((n, n), dtype=complex)
    H0 = np.block([[QM + MQ, -QM], [-MQ, Z]])
    H1 = 1j * np.block([[Z, -MQ], [QM, -QM + MQ]])
    return HermitianPencil(complex(lam), M, herm(H), herm(H0), herm(H1))


@dataclass
class BackwardErrorResult:
    """``eta`` is the backward error; ``t`` and ``g_star`` the inner minimizer and minimum."""

    eta: float
    t: np.ndarray
    g_star: float
    lam: complex
    evaluations: int = 0
    status: str = "converged"
    diagnostics: dict = field(default_factory=dict)


def _nm(g, x0, step, xatol, fatol):
    simplex = np.array([x0, x0 + [step, 0.0], x0 + [0.0, step]])
    res = minimize(g, x0, method="Nelder-Mead",
                   options={"initial_simplex": simplex, "xatol": xatol, "fatol": fatol,
                            "maxiter": 2000, "maxfev": 4000})
    return np.asarray(res.x, dtype=float), float(res.fun), int(res.nfev)


def minimize_lambda_max(pencil: HermitianPencil, warm=None, xtol=1e-8, ftol=1e-10):
    """Minimize ``g`` over the plane; returns ``(t*, g*, evaluations)``.

    The simplex starts at the best of ``(0, 0)``, a warm start, and a
    ``5 x 5`` grid on ``[-s, s]^2`` (``s`` = :attr:`HermitianPencil.scale`),
    and is restarted with a fresh simplex until the value stops improving.
    """
    s = pencil.scale
    g = pencil.g
    axis = np.linspace(-s, s, COARSE)
    cand = [np.zeros(2)] + [np.array([a, b]) for a in axis for b in axis]
    if warm is not None:
        cand.append(np.asarray(warm, dtype=float))
    vals = [g(c) for c in cand]
    nfev = len(cand)
    k = int(np.argmin(vals))
    t, gt = cand[k], vals[k]
    step = max(s / (COARSE - 1), 1e-6 * (1.0 + np.abs(t).max()))
    for _ in range(MAX_RESTARTS):
        tn, gn, fe = _nm(g, t, step, xtol * (1.0 + np.abs(t).max()), ftol * (1.0 + abs(gt)))
        nfev += fe
        improved = gn < gt - ftol * (1.0 + abs(gt))
        if gn < gt:
            t, gt = tn, gn
        if not improved:
            break
        # a small fresh simplex is enough to get unstuck at a kink
        step = max(1e-4 * s, 100 * xtol * (1.0 + np.abs(t).max()))
    return t, gt, nfev


def eta_s(sys: DHSystem, lam: complex, *, warm=None, xtol=1e-8, ftol=1e-10) -> BackwardErrorResult:
    """Backward error ``eta(lam)`` for perturbations in the class S.

    Returns ``eta = 0`` (status ``"eigenvalue"``) when `lam` is already an
    eigenvalue, and ``eta = inf`` (status ``"unbounded"``) when the inner
    minimum is at most 1e-12.
    """
    lam = complex(lam)
    try:
        pencil = build_pencil(sys, lam)
    except LambdaIsEigenvalue:
        return BackwardErrorResult(0.0, np.zeros(2), math.inf, lam, status="eigenvalue")
    t, g, nfev = minimize_lambda_max(pencil, warm=warm, xtol=xtol, ftol=ftol)
    if g <= G_ZERO_TOL:
        return BackwardErrorResult(math.inf, t, g, lam, nfev, status="unbounded")
    return BackwardErrorResult(1.0 / math.sqrt(g), t, g, lam, nfev)


def s_radius(sys: DHSystem, *, grid_points=om.DEFAULT_GRID, interval=None,
             refine_tol=1e-10) -> RadiusResult:
    """``r^S = inf_w eta(i w)``.

    Each inner solve is warm-started from the previous frequency's
    minimizer.  No optimal perturbation is constructed, so
    ``certificate`` is always None.
    """
    rep = validate(sys)
    if not rep.asymptotically_stable:
        return RadiusResult(0.0, PerturbationClass.S, 0.0, is_exact=False,
                            diagnostics={"stable": False, "spectral_abscissa": rep.spectral_abscissa})
    last: dict = {"t": None}
    cache: dict = {}

    def objective(w):
        r = eta_s(sys, 1j * w, warm=last["t"])
        if r.status == "converged":
            last["t"] = r.t
        cache[w] = r
        return r.eta

    res = om.search(sys, objective, grid_points=grid_points, interval=interval, refine_tol=refine_tol)
    best = cache[res.omega]
    diag = {"stable": True, "evaluations": res.evaluations, "failures": res.failures,
            "t_star": best.t.tolist(), "g_star": best.g_star, "inner_status": best.status,
            "certificate": "not constructed for this class"}
    return RadiusResult(res.value, PerturbationClass.S, res.omega, diagnostics=diag)
