"""Stability radius for skew-Hermitian ``dJ`` and negative semidefinite ``dR``.

For fixed ``w`` the squared radius integrand is

    f(y) = (y^* R^2 y / y^* R y)^2 + y^* P y,      ||y|| = 1,

with ``P = Q^{-1}(i w I - JQ)^*(i w I - JQ)Q^{-1}`` and ``y = Qx``.  Local
minimizers with ``y^* R y > 0`` solve the eigenvector-dependent problem
``H(y) y = mu y`` (``mu`` smallest), which is attacked with a
level-shifted self-consistent field iteration.  Minimizers inside the
nullspace of a singular `R` reduce to a plain eigenproblem of ``U^* P U``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import omega as om
from .exceptions import NonDifferentiablePoint
from .linalg import fix_phase, herm, nullspace_basis, solve_linear
from .mappings import min_negsemidef_map, min_skew_hermitian_map
from .system import (
    RQ_ZERO_TOL,
    DHSystem,
    PerturbationClass,
    PerturbationPair,
    RadiusResult,
    guarded_rq,
    is_member,
    validate,
    verify_certificate,
)

SCF_TOL = 1e-10
SCF_MAX_ITER = 500
MAX_DOUBLINGS = 60


@dataclass(eq=False)
class SdObjective:
    omega: float
    P: np.ndarray
    R: np.ndarray
    R2: np.ndarray
    zero_tol: float = RQ_ZERO_TOL

    def __post_init__(self):
        n = self.R.shape[0]
        self._K = np.stack([self.R2, self.R, self.P, np.eye(n, dtype=complex)])

    def forms(self, y):
        """``(y^*R^2y, y^*Ry, y^*Py, y^*y)`` as a real array."""
        return ((self._K @ y) @ y.conj()).real

    def cross_forms(self, d, s):
        """``Re(d^* K s)`` for each of the four matrices."""
        return ((self._K @ s) @ d.conj()).real

    def value(self, y) -> float:
        z1, z2, z3, z0 = self.forms(y)
        return guarded_rq(z1 / z0, z2 / z0) ** 2 + z3 / z0

    def _h_from_forms(self, z):
        return guarded_rq(z[0] / z[3], z[1] / z[3]) ** 2 + z[2] / z[3]


def sd_objective(sys: DHSystem, w: float, Qinv=None) -> SdObjective:
    n = sys.n
    if Qinv is None:
        Qinv = solve_linear(sys.Q, np.eye(n, dtype=complex))
    B = 1j * w * Qinv - sys.J
    R = herm(sys.R)
    return SdObjective(
        omega=float(w),
        P=herm(B.conj().T @ B),
        R=R,
        R2=herm(R @ R),
        zero_tol=RQ_ZERO_TOL * max(1.0, float(np.abs(np.linalg.eigvalsh(R)).max())),
    )


def nepv_matrix(x, obj: SdObjective) -> np.ndarray:
    """``H(x) = 2 (x^*R^2x)/(x^*Rx)^2 R^2 - 2 (x^*R^2x)^2/(x^*Rx)^3 R + P`` for unit `x`.

    Raises
    ------
    NonDifferentiablePoint
        If ``x^* R x`` is numerically zero.
    """
    x = np.asarray(x, dtype=complex)
    return _nepv_from_forms(obj, obj.forms(x))


def _nepv_from_forms(obj, z):
    z1, z2 = z[0] / z[3], z[1] / z[3]
    if z2 <= obj.zero_tol:
        raise NonDifferentiablePoint(f"x^*Rx = {z2:.3e} vanishes")
    # R2, R and P are exactly Hermitian, so is the combination
    return (2.0 * z1 / z2**2) * obj.R2 - (2.0 * z1**2 / z2**3) * obj.R + obj.P


def _objective_change(obj: SdObjective, x, xn, z=None):
    """``f(xn) - f(x)`` evaluated without cancellation.

    Differences of quadratic forms are computed as ``Re((xn - x)^* K (xn + x))``
    after aligning the phase of `xn` with `x`, so decreases far below the
    rounding level of ``f`` itself remain visible.
    """
    c = np.vdot(xn, x)
    if c != 0:
        xn = xn * (c / abs(c))
    z1, z2, z3, z0 = obj.forms(x) if z is None else z
    dz1, dz2, dz3, dz0 = obj.cross_forms(xn - x, xn + x)
    a, an = z1 / z2, (z1 + dz1) / (z2 + dz2)
    da = (dz1 * z2 - z1 * dz2) / (z2 * (z2 + dz2))
    dq = (dz3 * z0 - z3 * dz0) / (z0 * (z0 + dz0))
    return da * (a + an) + dq


@dataclass
class NEPvState:
    x: np.ndarray
    h_value: float
    residual: float
    shift_used: float
    iteration: int
    status: str = "converged"
    history: list = field(default_factory=list)
    decrements: list = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.status == "converged"


def _residual(H, x):
    Hx = H @ x
    s = np.vdot(x, Hx).real
    return float(np.linalg.norm(Hx - s * x) / (np.abs(H).sum(axis=0).max() + 1.0))


def scf_solve(obj: SdObjective, x0, tol: float = SCF_TOL, max_iter: int = SCF_MAX_ITER) -> NEPvState:
    """Level-shifted SCF for ``H(x) x = mu x``.

    Each step takes the eigenvector of the smallest eigenvalue of
    ``H(x_k) - sigma_k x_k x_k^*``, trying ``sigma_k = 0, 2 delta_k, 4 delta_k, ...``
    (``delta_k`` the gap between the two smallest eigenvalues of
    ``H(x_k)``) until the objective strictly decreases.  Stops when
    ``||H(x_k)x_k - s_k x_k|| / (||H(x_k)||_1 + 1) <= tol``.

    The returned state has ``status`` ``"converged"``, ``"max_iter"`` or
    ``"shift_overflow"`` (no shift in 60 doublings decreased the objective);
    in every case it holds the best iterate.
    """
    x = np.asarray(x0, dtype=complex).ravel()
    x = fix_phase(x / np.linalg.norm(x))
    z = obj.forms(x)
    H = _nepv_from_forms(obj, z)
    h = obj._h_from_forms(z)
    history, decrements = [h], []
    shift = 0.0
    status = "max_iter"
    it = 0
    for it in range(max_iter + 1):
        res = _residual(H, x)
        if res <= tol:
            status = "converged"
            break
        if it == max_iter:
            break
        w, V = np.linalg.eigh(H)
        delta = 1.0
        accepted = None
        for j in range(MAX_DOUBLINGS + 1):
            if j == 1:
                normH = np.abs(H).sum(axis=0).max()
                delta = max(w[1] - w[0], 1e-8 * (1.0 + normH)) if w.size > 1 else 1.0
                xx = np.outer(x, x.conj())
            if j:
                # damping shift: keeps x_k an eigenvector while lowering its eigenvalue
                _, V = np.linalg.eigh(H - (2.0**j * delta) * xx)
            xn = V[:, 0]
            if obj.forms(xn)[1] <= obj.zero_tol:
                continue
            dh = _objective_change(obj, x, xn, z)
            if dh < 0:
                accepted = (xn, 0.0 if j == 0 else 2.0**j * delta, dh)
                break
        if accepted is None:
            status = "shift_overflow"
            break
        xn, shift, dh = accepted
        x = fix_phase(xn)
        z = obj.forms(x)
        H = _nepv_from_forms(obj, z)
        h = obj._h_from_forms(z)
        history.append(h)
        decrements.append(dh)
    return NEPvState(x=x, h_value=h, residual=_residual(H, x), shift_used=shift, iteration=it,
                     status=status, history=history, decrements=decrements)


@dataclass
class SdInner:
    value: float
    y: np.ndarray
    x: np.ndarray
    branch: str
    states: list = field(default_factory=list, repr=False)
    nullspace_value: Optional[float] = None


def _start_vectors(sys: DHSystem, obj: SdObjective, multistart: int, Qinv, warm=None):
    n = sys.n
    wr, Vr = np.linalg.eigh(obj.R)
    _, Vp = np.linalg.eigh(obj.P)
    starts = [Vr[:, 0], Vp[:, 0], Qinv @ Vr[:, 0]]
    rng = np.random.default_rng(12345)
    while len(starts) < multistart:
        starts.append(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    starts = starts[:multistart]
    if warm is not None:
        starts.append(np.asarray(warm, dtype=complex))
    v_max = Vr[:, -1]
    out = []
    for y in starts:
        y = y / np.linalg.norm(y)
        if obj.forms(y)[1] <= obj.zero_tol * 1e3:
            # move off the nullspace of R so H(y) is defined
            y = y + 0.1 * v_max
            y = y / np.linalg.norm(y)
        out.append(y)
    return out


def sd_inner(sys: DHSystem, w: float, multistart: int = 5, *, tol: float = SCF_TOL,
             max_iter: int = SCF_MAX_ITER, Qinv=None, warm=None,
             null_basis=None) -> SdInner:
    """Minimum of the squared-radius integrand at frequency `w`.

    Combines the best SCF solution over `multistart` starting vectors
    (the eigenvector of the smallest eigenvalue of `R`, that of `P`, its
    ``Q^{-1}`` image, and random vectors) with, for singular `R`, the
    nullspace candidate ``lambda_min(U^* P U)``; the smaller one wins.
    """
    n = sys.n
    if Qinv is None:
        Qinv = solve_linear(sys.Q, np.eye(n, dtype=complex))
    obj = sd_objective(sys, w, Qinv)
    U = nullspace_basis(obj.R) if null_basis is None else null_basis

    states = []
    if U.shape[1] < n:
        for y0 in _start_vectors(sys, obj, multistart, Qinv, warm):
            states.append(scf_solve(obj, y0, tol=tol, max_iter=max_iter))
    best = min(states, key=lambda s: s.h_value) if states else None

    null_val = None
    if U.shape[1] > 0:
        wu, Vu = np.linalg.eigh(herm(U.conj().T @ obj.P @ U))
        null_val = float(wu[0])
        y_null = U @ Vu[:, 0]

    if best is not None and (null_val is None or best.h_value <= null_val):
        value, y, branch = best.h_value, best.x, "nepv"
    else:
        value, y, branch = null_val, fix_phase(y_null / np.linalg.norm(y_null)), "nullspace"
    x = Qinv @ y
    x = x / np.linalg.norm(x)
    return SdInner(value=float(value), y=y, x=x, branch=branch, states=states, nullspace_value=null_val)


def sd_certificate(sys: DHSystem, w: float, x) -> PerturbationPair:
    """``dR = -(RQx)(RQx)^*/(x^*QRQx)`` and the minimal skew ``dJ`` with ``(J + dJ)Qx = i w x``."""
    x = np.asarray(x, dtype=complex)
    dR = min_negsemidef_map(sys.R, sys.Q, x).map
    dJ = min_skew_hermitian_map(sys.Q @ x, (1j * w * np.eye(sys.n) - sys.J @ sys.Q) @ x).map
    return PerturbationPair(dJ, dR)


def sd_radius(sys: DHSystem, *, grid_points=om.DEFAULT_GRID, interval=None, refine_tol=1e-10,
              multistart: int = 5, tol: float = SCF_TOL, max_iter: int = SCF_MAX_ITER,
              certificate: bool = True) -> RadiusResult:
    """``r^{S_d} = sqrt(inf_w min_y f_w(y))`` with an explicit optimal perturbation."""
    rep = validate(sys)
    if not rep.asymptotically_stable:
        return RadiusResult(0.0, PerturbationClass.S_D, 0.0,
                            diagnostics={"stable": False, "spectral_abscissa": rep.spectral_abscissa})
    n = sys.n
    Qinv = solve_linear(sys.Q, np.eye(n, dtype=complex))
    U = nullspace_basis(herm(sys.R))
    cache: dict[float, SdInner] = {}

    def objective(w):
        inner = sd_inner(sys, w, multistart, tol=tol, max_iter=max_iter, Qinv=Qinv, null_basis=U)
        cache[w] = inner
        return inner.value

    res = om.search(sys, objective, grid_points=grid_points, interval=interval, refine_tol=refine_tol)
    inner = cache[res.omega]
    value = math.sqrt(max(inner.value, 0.0))
    scf = [s for s in inner.states]
    diag = {
        "stable": True,
        "evaluations": res.evaluations,
        "failures": res.failures,
        "branch": inner.branch,
        "squared_value": inner.value,
        "nullspace_value": inner.nullspace_value,
        "scf_status": [s.status for s in scf],
        "scf_iterations": [s.iteration for s in scf],
        "scf_residuals": [s.residual for s in scf],
    }
    cert = None
    if certificate:
        cert = sd_certificate(sys, res.omega, inner.x)
        check = verify_certificate(sys, cert, res.omega, inner.x)
        check["member"] = is_member(check["class"], PerturbationClass.S_D)
        check["class"] = check["class"].value
        diag["certificate_check"] = check
    return RadiusResult(value, PerturbationClass.S_D, res.omega, x_star=inner.x, certificate=cert,
                        is_exact=True, diagnostics=diag)


@dataclass
class SdBounds:
    """Bounds on the squared S_d radius."""

    lower: float
    upper: float
    d_n: float
    x_hat: np.ndarray
    omega_lower: float = 0.0
    omega_upper: float = 0.0


def sd_bounds(sys: DHSystem, *, grid_points=om.DEFAULT_GRID, interval=None, refine_tol=1e-10) -> SdBounds:
    """Sandwich ``lower <= (r^{S_d})^2 <= upper`` from the smallest eigenpair of `R`.

    ``lower = d_n^2 + inf_w lambda_min(P(w))`` and
    ``upper = d_n^2 + inf_w ||(i w I - JQ) x_hat||^2 / ||Q x_hat||^2``
    with ``x_hat = Q^{-1} v_n``.
    """
    n = sys.n
    Qinv = solve_linear(sys.Q, np.eye(n, dtype=complex))
    wr, Vr = np.linalg.eigh(herm(sys.R))
    d_n = max(float(wr[0]), 0.0)
    x_hat = Qinv @ Vr[:, 0]
    JQ = sys.J @ sys.Q

    def lower_obj(w):
        B = 1j * w * Qinv - sys.J
        return float(np.linalg.eigvalsh(herm(B.conj().T @ B))[0])

    def upper_obj(w):
        v = 1j * w * x_hat - JQ @ x_hat
        return float(np.vdot(v, v).real / np.vdot(sys.Q @ x_hat, sys.Q @ x_hat).real)

    lo = om.search(sys, lower_obj, grid_points=grid_points, interval=interval, refine_tol=refine_tol)
    up = om.search(sys, upper_obj, grid_points=grid_points, interval=interval, refine_tol=refine_tol)
    return SdBounds(lower=d_n**2 + lo.value, upper=d_n**2 + up.value, d_n=d_n, x_hat=x_hat,
                    omega_lower=lo.omega, omega_upper=up.omega)
