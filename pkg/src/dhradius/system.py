"""Dissipative-Hamiltonian systems, perturbation pairs and test generators."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .exceptions import (
    DimensionMismatch,
    GenerationFailed,
    IllPosedQuotient,
    InvalidOverride,
)
from .linalg import as_cmatrix, herm, hermitian_deviation, nullspace_basis, spectral_norm

HERM_TOL = 1e-12
PSD_TOL = 1e-10
STAB_TOL = 1e-10
RQ_ZERO_TOL = 1e-14


def _frozen(A):
    A.setflags(write=False)
    return A


@dataclass(frozen=True, eq=False)
class DHSystem:
    """The triple ``(J, R, Q)`` of a system ``x' = (J - R) Q x``.

    Construction only checks shapes and finiteness; :func:`validate`
    measures the structural properties.  `Q` defaults to the identity.
    """

    J: np.ndarray
    R: np.ndarray
    Q: Optional[np.ndarray] = None

    def __post_init__(self):
        J = as_cmatrix(self.J, "J")
        n = J.shape[0]
        R = as_cmatrix(self.R, "R")
        Q = np.eye(n, dtype=complex) if self.Q is None else as_cmatrix(self.Q, "Q")
        for name, M in (("J", J), ("R", R), ("Q", Q)):
            if M.shape != (n, n):
                raise DimensionMismatch(f"{name} has shape {M.shape}, expected ({n}, {n})")
        object.__setattr__(self, "J", _frozen(J))
        object.__setattr__(self, "R", _frozen(R))
        object.__setattr__(self, "Q", _frozen(Q))

    @property
    def n(self) -> int:
        return self.J.shape[0]

    @property
    def A(self) -> np.ndarray:
        """System matrix ``(J - R) Q``."""
        return (self.J - self.R) @ self.Q

    def scaled(self, c: float) -> "DHSystem":
        """System ``(cJ, cR, Q)``."""
        return DHSystem(c * self.J, c * self.R, self.Q)

    def transformed(self, U) -> "DHSystem":
        """Unitary congruence ``(U^* J U, U^* R U, U^* Q U)``."""
        U = np.asarray(U, dtype=complex)
        Uh = U.conj().T
        return DHSystem(Uh @ self.J @ U, Uh @ self.R @ U, Uh @ self.Q @ U)


class PerturbationClass(enum.Enum):
    UNSTRUCTURED = "unstructured"
    S = "s"
    S_I = "si"
    S_D = "sd"


# S_d is the tightest set; every S_d pair is also S_i, S and unstructured.
_NESTING = {
    PerturbationClass.S_D: 3,
    PerturbationClass.S_I: 2,
    PerturbationClass.S: 1,
    PerturbationClass.UNSTRUCTURED: 0,
}


def is_member(tight: PerturbationClass, cls: PerturbationClass) -> bool:
    """True if a pair of tightest class `tight` belongs to the set `cls`."""
    return _NESTING[tight] >= _NESTING[cls]


@dataclass(frozen=True, eq=False)
class PerturbationPair:
    deltaJ: np.ndarray
    deltaR: np.ndarray

    def __post_init__(self):
        dJ = as_cmatrix(self.deltaJ, "deltaJ")
        dR = as_cmatrix(self.deltaR, "deltaR")
        if dJ.shape != dR.shape or dJ.shape[0] != dJ.shape[1]:
            raise DimensionMismatch(f"deltaJ {dJ.shape} and deltaR {dR.shape} must be equal and square")
        object.__setattr__(self, "deltaJ", _frozen(dJ))
        object.__setattr__(self, "deltaR", _frozen(dR))

    @property
    def joint_norm(self) -> float:
        return joint_norm(self)


@dataclass
class RadiusResult:
    """Outcome of a stability-radius computation.

    ``value`` is the radius (not its square).  ``is_exact`` is False when
    the value is only a lower bound, as for ``S_i`` with singular `R`.
    """

    value: float
    kind: PerturbationClass
    omega_star: float
    x_star: Optional[np.ndarray] = None
    certificate: Optional[PerturbationPair] = None
    is_exact: bool = True
    diagnostics: dict[str, Any] = field(default_factory=dict)


@dataclass
class ValidationReport:
    n: int
    j_skew_deviation: float
    j_skew_tol: float
    r_min_eig: float
    r_psd_tol: float
    q_min_eig: float
    spectral_abscissa: float
    asymptotically_stable: bool
    r_singular: bool
    r_hermitian: bool = True
    q_hermitian: bool = True

    @property
    def j_skew(self) -> bool:
        return self.j_skew_deviation <= self.j_skew_tol

    @property
    def r_hermitian_psd(self) -> bool:
        return self.r_hermitian and self.r_min_eig >= -self.r_psd_tol

    @property
    def q_positive_definite(self) -> bool:
        return self.q_hermitian and self.q_min_eig >= HERM_TOL

    @property
    def is_dh(self) -> bool:
        return self.j_skew and self.r_hermitian_psd and self.q_positive_definite

    def failures(self) -> list[str]:
        out = []
        if not self.j_skew:
            out.append(f"J is not skew-Hermitian (||J + J^*||_F = {self.j_skew_deviation:.3e})")
        if not self.r_hermitian:
            out.append("R is not Hermitian")
        elif not self.r_hermitian_psd:
            out.append(f"R is not positive semidefinite (lambda_min = {self.r_min_eig:.3e})")
        if not self.q_hermitian:
            out.append("Q is not Hermitian")
        elif not self.q_positive_definite:
            out.append(f"Q is not positive definite (lambda_min = {self.q_min_eig:.3e})")
        return out

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "is_dh": self.is_dh,
            "asymptotically_stable": self.asymptotically_stable,
            "j_skew_deviation": self.j_skew_deviation,
            "r_min_eig": self.r_min_eig,
            "q_min_eig": self.q_min_eig,
            "spectral_abscissa": self.spectral_abscissa,
            "r_singular": self.r_singular,
            "failures": self.failures(),
        }


def _herm_ok(A):
    return hermitian_deviation(A) <= HERM_TOL * (1.0 + np.linalg.norm(A, "fro"))


def validate(sys: DHSystem) -> ValidationReport:
    """Check the DH structure of `sys` and its asymptotic stability."""
    J, R, Q = sys.J, sys.R, sys.Q
    jdev = np.linalg.norm(J + J.conj().T, "fro")
    jtol = HERM_TOL * (1.0 + np.linalg.norm(J, "fro"))
    wr = np.linalg.eigvalsh(herm(R))
    wq = np.linalg.eigvalsh(herm(Q))
    alpha = float(np.max(np.linalg.eigvals(sys.A).real))
    return ValidationReport(
        n=sys.n,
        j_skew_deviation=float(jdev),
        j_skew_tol=float(jtol),
        r_min_eig=float(wr[0]),
        r_psd_tol=HERM_TOL * (1.0 + max(wr[-1], 0.0)),
        q_min_eig=float(wq[0]),
        spectral_abscissa=alpha,
        asymptotically_stable=alpha < -STAB_TOL,
        r_singular=bool(nullspace_basis(R).shape[1] > 0),
        r_hermitian=_herm_ok(R),
        q_hermitian=_herm_ok(Q),
    )


def joint_norm(p: PerturbationPair) -> float:
    """``sqrt(||dJ||^2 + ||dR||^2)`` in the spectral norm."""
    return float(np.hypot(spectral_norm(p.deltaJ), spectral_norm(p.deltaR)))


def classify(sys: DHSystem, p: PerturbationPair) -> PerturbationClass:
    """Tightest perturbation set containing `p`.

    Structure checks use a relative tolerance of 1e-10 on the Frobenius
    deviation; semidefiniteness is tested on smallest eigenvalues with
    slack ``1e-10 (1 + lambda_max(R))``.
    """
    if p.deltaJ.shape != sys.J.shape:
        raise DimensionMismatch(f"perturbation is {p.deltaJ.shape}, system is {sys.J.shape}")
    dJ, dR = p.deltaJ, p.deltaR
    skew = np.linalg.norm(dJ + dJ.conj().T, "fro") <= PSD_TOL * (1.0 + np.linalg.norm(dJ, "fro"))
    herm_r = hermitian_deviation(dR) <= PSD_TOL * (1.0 + np.linalg.norm(dR, "fro"))
    if not (skew and herm_r):
        return PerturbationClass.UNSTRUCTURED
    R = herm(sys.R)
    slack = PSD_TOL * (1.0 + max(np.linalg.eigvalsh(R)[-1], 0.0))
    if np.linalg.eigvalsh(R + herm(dR))[0] < -slack:
        return PerturbationClass.S
    if np.linalg.eigvalsh(herm(dR))[-1] > slack:
        return PerturbationClass.S_I
    return PerturbationClass.S_D


def perturbed_matrix(sys: DHSystem, p: PerturbationPair) -> np.ndarray:
    return (sys.J + p.deltaJ - (sys.R + p.deltaR)) @ sys.Q


def verify_certificate(sys: DHSystem, p: PerturbationPair, omega: float, x=None) -> dict:
    """Independent checks on a claimed minimal perturbation.

    Reports the tightest class, the joint norm, the distance from
    ``i omega`` to the nearest eigenvalue of the perturbed matrix and,
    when an eigenvector `x` is supplied, the eigen-residual.
    """
    A = perturbed_matrix(sys, p)
    ev = np.linalg.eigvals(A)
    out = {
        "class": classify(sys, p),
        "joint_norm": joint_norm(p),
        "eig_distance": float(np.min(np.abs(ev - 1j * omega))),
        "min_abs_real": float(np.min(np.abs(ev.real))),
    }
    if x is not None:
        x = np.asarray(x, dtype=complex)
        out["residual"] = float(np.linalg.norm(A @ x - 1j * omega * x) / np.linalg.norm(x))
    return out


def guarded_rq(num: float, den: float) -> float:
    """Quotient of two PSD quadratic forms with ``0/0 := 0``."""
    if abs(den) <= RQ_ZERO_TOL:
        if abs(num) <= RQ_ZERO_TOL:
            return 0.0
        if num > 1e-10 * (1.0 + abs(num)):
            raise IllPosedQuotient(f"numerator {num:.3e} over vanishing denominator {den:.3e}")
        return 0.0
    return num / den


def _cgauss(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_dh(n: int, seed: int) -> DHSystem:
    """Random asymptotically stable DH system, deterministic per `seed`.

    ``J = (B - B^*)/2``, ``R = C^* C / n``, ``Q = D^* D / n + 0.1 I`` from
    standard complex Gaussian ``B, C, D``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    for _ in range(10):
        B, C, D = _cgauss(rng, n, n), _cgauss(rng, n, n), _cgauss(rng, n, n)
        sys = DHSystem(
            0.5 * (B - B.conj().T),
            herm(C.conj().T @ C / n),
            herm(D.conj().T @ D / n) + 0.1 * np.eye(n),
        )
        rep = validate(sys)
        if rep.is_dh and rep.asymptotically_stable:
            return sys
    raise GenerationFailed(f"no asymptotically stable DH system after 10 draws (n={n}, seed={seed})")


def brake_squeal(m: int, seed: int = 0, G=None, M=None, K=None, D=None) -> DHSystem:
    """First-order DH model of a gyroscopic damped oscillator (``N = 0``).

    Returns the ``2m``-dimensional system with ``J = [[G, K], [-K, 0]]``,
    ``R = diag(D, 0)`` and ``Q = diag(M, K)^{-1}``.  Blocks not supplied
    are drawn at random from `seed`: `G` skew-Hermitian, `M` and `K`
    Hermitian positive definite, `D` Hermitian positive semidefinite.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(seed)
    # draw all four blocks so overriding one leaves the others unchanged
    draws = [_cgauss(rng, m, m) for _ in range(4)]
    defaults = {
        "G": 0.5 * (draws[0] - draws[0].conj().T),
        "M": draws[1].conj().T @ draws[1] / m + np.eye(m),
        "K": draws[2].conj().T @ draws[2] / m + np.eye(m),
        "D": draws[3].conj().T @ draws[3] / m,
    }

    def block(given, name):
        if given is None:
            return defaults[name]
        B = np.array(given, dtype=complex)
        if B.ndim == 0:
            B = B * np.eye(m)
        if B.shape != (m, m):
            raise InvalidOverride(f"{name} must be {m}x{m}, got {B.shape}")
        return B

    G, M, K, D = block(G, "G"), block(M, "M"), block(K, "K"), block(D, "D")

    if np.linalg.norm(G + G.conj().T) > HERM_TOL * (1 + np.linalg.norm(G)):
        raise InvalidOverride("G must be skew-Hermitian")
    for name, B, strict in (("M", M, True), ("K", K, True), ("D", D, False)):
        if not _herm_ok(B):
            raise InvalidOverride(f"{name} must be Hermitian")
        lo = np.linalg.eigvalsh(herm(B))[0]
        if (strict and lo <= 0) or (not strict and lo < -PSD_TOL):
            raise InvalidOverride(f"{name} must be positive {'definite' if strict else 'semidefinite'}")
    G = 0.5 * (G - G.conj().T)
    M, K, D = herm(M), herm(K), herm(D)

    Z = np.zeros((m, m), dtype=complex)
    J = np.block([[G, K], [-K, Z]])
    R = np.block([[D, Z], [Z, Z]])
    Q = np.block([[np.linalg.inv(M), Z], [Z, np.linalg.inv(K)]])
    return DHSystem(J, R, herm(Q))
