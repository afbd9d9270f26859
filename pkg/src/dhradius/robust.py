"""DH representations ``A = (J - R)`` of a stable matrix, with ``Q = I``.

A Hermitian positive definite ``X`` with ``A^*X + XA < 0`` and its square
root ``T`` turn ``A`` into ``A_T = T A T^{-1}``, whose skew and negated
Hermitian parts are ``J`` and ``R``.  Choosing ``X`` from the shifted
equation

    (A - (mu + eps) I)^* X + X (A - (mu + eps) I) = -eps I,

with ``mu`` the spectral abscissa, pushes the Hermitian part of ``A_T``
towards ``mu I``, which makes every stability radius close to ``|mu|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import IllConditioned, NotPositiveDefinite, NotStableError
from .linalg import as_cmatrix, herm, hermitian_sqrt, lyapunov_solve, spectral_norm
from .system import DHSystem

COND_MAX = 1e12
PD_TOL = 1e-12


def spectral_abscissa(A) -> float:
    """Largest real part of an eigenvalue of `A`."""
    A = as_cmatrix(A, "A")
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got {A.shape}")
    return float(np.max(np.linalg.eigvals(A).real))


@dataclass(eq=False)
class RobustRepresentation:
    J: np.ndarray
    R: np.ndarray
    X: np.ndarray
    T: np.ndarray
    mu: float
    epsilon: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    @property
    def system(self) -> DHSystem:
        return DHSystem(self.J, self.R, None)


def _from_gram(A, X, mu, epsilon, diag):
    w = np.linalg.eigvalsh(X)
    if w[0] <= PD_TOL * w[-1]:
        raise NotPositiveDefinite(f"Gram solution is not positive definite (lambda_min/lambda_max = {w[0] / w[-1]:.3e})")
    T, Tinv = hermitian_sqrt(X)
    AT = T @ A @ Tinv
    J = 0.5 * (AT - AT.conj().T)
    R = -herm(AT)
    diag = dict(diag, cond_X=float(w[-1] / w[0]))
    return RobustRepresentation(J, R, X, T, mu, epsilon, diag)


def optimal_representation(A, epsilon: float = 1e-8) -> RobustRepresentation:
    """Representation whose dissipation is as close as possible to ``|mu| I``.

    Parameters
    ----------
    A : (n, n) array_like
        Asymptotically stable matrix.
    epsilon : float
        Shift and right-hand side of the regularized Lyapunov equation.
        Smaller values bring ``R`` closer to ``|mu| I`` but worsen the
        conditioning of ``X``.

    Raises
    ------
    NotStableError
        If the spectral abscissa is not negative.
    IllConditioned
        If ``cond(X) > 1e12``; a larger `epsilon` usually helps.
    """
    A = as_cmatrix(A, "A")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    mu = spectral_abscissa(A)
    if mu >= 0:
        raise NotStableError(f"A is not asymptotically stable (spectral abscissa {mu:.3e})")
    n = A.shape[0]
    I = np.eye(n, dtype=complex)
    X = lyapunov_solve(A - (mu + epsilon) * I, epsilon * I)
    X = X / spectral_norm(X)
    w = np.linalg.eigvalsh(X)
    if w[0] <= 0 or w[-1] / w[0] > COND_MAX:
        raise IllConditioned(f"cond(X) = {w[-1] / max(w[0], 1e-300):.3e} exceeds {COND_MAX:.0e}; increase epsilon")
    return _from_gram(A, X, mu, float(epsilon), {})


def representation_from_factor(A, Z) -> RobustRepresentation:
    """Representation from the Gram solution of ``A^*X + XA = -Z^*Z``.

    Raises
    ------
    NotPositiveDefinite
        If ``lambda_min(X) <= 1e-12 lambda_max(X)``.
    """
    A = as_cmatrix(A, "A")
    Z = as_cmatrix(Z, "Z")
    if Z.shape[1] != A.shape[0]:
        raise ValueError(f"Z must have {A.shape[0]} columns, got {Z.shape}")
    mu = spectral_abscissa(A)
    if mu >= 0:
        raise NotStableError(f"A is not asymptotically stable (spectral abscissa {mu:.3e})")
    X = lyapunov_solve(A, herm(Z.conj().T @ Z))
    return _from_gram(A, X, mu, 0.0, {})


def random_stable(n: int, seed: int) -> np.ndarray:
    """Random complex matrix shifted so its spectral abscissa lies in ``[-1.5, -0.5)``."""
    rng = np.random.default_rng(seed)
    B = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    shift = np.max(np.linalg.eigvals(B).real) + 0.5 + rng.uniform()
    return B - shift * np.eye(n)
