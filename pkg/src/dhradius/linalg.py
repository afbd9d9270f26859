"""Dense complex linear-algebra primitives.

Everything here is a thin, validated layer over LAPACK (through numpy and
scipy).  Inputs are converted to ``complex128`` arrays; outputs are fresh
arrays that callers may modify.
"""

import warnings

import numpy as np
import scipy.linalg as sla

from .exceptions import (
    NonSquareError,
    NotHermitianError,
    ShapeError,
    SingularMatrixError,
    SpectrumConflictError,
)

EPS = np.finfo(float).eps
SINGULAR_RCOND = 1e-14


def as_cmatrix(A, name="A"):
    """Return `A` as a finite 2-D complex128 array."""
    A = np.array(A, dtype=complex, copy=True)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ShapeError(f"{name} must be a nonempty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return A


def as_cvector(x, name="x"):
    x = np.array(x, dtype=complex, copy=True).reshape(-1)
    if x.size < 1:
        raise ShapeError(f"{name} must be nonempty")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return x


def herm(A):
    """Hermitian part (A + A^*)/2."""
    return 0.5 * (A + A.conj().T)


def hermitian_deviation(A):
    return np.linalg.norm(A - A.conj().T, "fro")


def _check_square(A, name):
    if A.shape[0] != A.shape[1]:
        raise NonSquareError(f"{name} must be square, got shape {A.shape}")


def check_hermitian(A, name="A"):
    """Validate that `A` is square and Hermitian to ``1e-12 (1 + ||A||_F)``.

    Returns the symmetrized matrix.
    """
    A = as_cmatrix(A, name)
    _check_square(A, name)
    tol = 1e-12 * (1.0 + np.linalg.norm(A, "fro"))
    dev = hermitian_deviation(A)
    if dev > tol:
        raise NotHermitianError(f"{name} is not Hermitian (deviation {dev:.3e} > {tol:.3e})")
    return herm(A)


def hermitian_eig(A, check=True):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    A : (n, n) array_like
        Hermitian matrix.  It is symmetrized before factoring.
    check : bool
        Validate squareness and the Hermitian deviation.  Hot loops that
        already hold an exactly symmetrized matrix pass ``False``.

    Returns
    -------
    w : (n,) ndarray
        Real eigenvalues in ascending order.
    V : (n, n) ndarray
        Unitary matrix of eigenvectors, ``A V = V diag(w)``.
    """
    A = check_hermitian(A) if check else herm(np.asarray(A, dtype=complex))
    w, V = np.linalg.eigh(A)
    return w, V


def smallest_singular(A):
    """Smallest singular value of a tall matrix and its right singular vector."""
    A = as_cmatrix(A)
    m, n = A.shape
    if m < n:
        raise ShapeError(f"need at least as many rows as columns, got {A.shape}")
    _, s, Vh = np.linalg.svd(A, full_matrices=False)
    return float(s[-1]), Vh[-1].conj()


def spectral_norm(A):
    return float(np.linalg.norm(A, 2))


def solve_linear(A, B):
    """Solve ``A X = B`` by LU, refusing numerically singular `A`.

    Raises
    ------
    SingularMatrixError
        If the 1-norm reciprocal condition estimate is below 1e-14.
    """
    A = as_cmatrix(A)
    _check_square(A, "A")
    B = np.asarray(B, dtype=complex)
    if B.shape[0] != A.shape[0]:
        raise ShapeError(f"B has {B.shape[0]} rows, A is {A.shape[0]}x{A.shape[0]}")
    anorm = np.linalg.norm(A, 1)
    if anorm == 0.0:
        raise SingularMatrixError("matrix is zero")
    with warnings.catch_warnings():
        # singularity is judged by the condition estimate below
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    (gecon,) = sla.get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or rcond < SINGULAR_RCOND:
        raise SingularMatrixError(f"matrix is numerically singular (rcond={rcond:.3e})")
    return sla.lu_solve((lu, piv), B, check_finite=False)


def lyapunov_solve(A, C):
    """Solve ``A^* X + X A = -C`` for Hermitian `X` (Bartels-Stewart).

    Raises
    ------
    NotHermitianError
        If `C` is not Hermitian.
    SpectrumConflictError
        If ``lambda_i + conj(lambda_j)`` is numerically zero for some pair
        of eigenvalues of `A`, so the solution is not unique.
    """
    A = as_cmatrix(A)
    _check_square(A, "A")
    C = check_hermitian(C, "C")
    if C.shape != A.shape:
        raise ShapeError("A and C must have the same shape")
    ev = np.linalg.eigvals(A)
    sums = np.abs(ev[:, None] + ev[None, :].conj())
    scale = max(1.0, np.abs(ev).max())
    if sums.min() <= 1e-12 * scale:
        raise SpectrumConflictError(
            f"eigenvalue pair with lambda_i + conj(lambda_j) = {sums.min():.3e}"
        )
    # scipy solves  a X + X a^H = q;  take a = A^*
    X = sla.solve_continuous_lyapunov(A.conj().T, -C)
    return herm(X)


def nullspace_basis(A, tol=None):
    """Orthonormal basis of the numerical nullspace of a Hermitian PSD matrix.

    Eigenvectors with eigenvalue ``<= tol`` span the returned columns; the
    default cutoff is ``n * eps * lambda_max(A)``.  A definite matrix gives
    an ``(n, 0)`` array.
    """
    w, V = hermitian_eig(A)
    n = w.size
    if tol is None:
        tol = n * EPS * max(w[-1], 0.0)
    return V[:, w <= tol]


def hermitian_sqrt(X):
    """Positive square root and its inverse of a Hermitian PD matrix."""
    w, V = hermitian_eig(X)
    if w[0] <= 0:
        raise np.linalg.LinAlgError("matrix is not positive definite")
    r = np.sqrt(w)
    T = herm((V * r) @ V.conj().T)
    Tinv = herm((V / r) @ V.conj().T)
    return T, Tinv


def fix_phase(x):
    """Rotate `x` so its largest-magnitude entry is real and positive."""
    k = int(np.argmax(np.abs(x)))
    a = x[k]
    if a == 0:
        return x
    return x * (abs(a) / a)
