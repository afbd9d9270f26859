"""scikit-learn style wrappers around the functional API.

The "data" here is a DH system or a stable matrix rather than a sample
matrix, so the wrappers follow the fit / predict / transform conventions
and parameter handling of scikit-learn without claiming compatibility
with its sample-oriented utilities.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import omega as om
from .backward_error import eta_s, s_radius
from .robust import optimal_representation, representation_from_factor
from .sd import SCF_MAX_ITER, SCF_TOL, sd_radius
from .si import si_radius
from .unstructured import unstructured_radius
from .validation import as_system, check_square_matrix, check_vectors

_KINDS = ("unstructured", "s", "si", "sd")


def compute_radius(sys, kind, *, grid_points=om.DEFAULT_GRID, interval=None, refine_tol=1e-10,
                   multistart=5, tol=SCF_TOL, max_iter=SCF_MAX_ITER, certificate=True):
    """Dispatch to the radius routine for ``kind`` in ``{"unstructured", "s", "si", "sd"}``."""
    common = dict(grid_points=grid_points, interval=interval, refine_tol=refine_tol)
    if kind == "unstructured":
        return unstructured_radius(sys, **common)
    if kind == "s":
        return s_radius(sys, **common)
    if kind == "si":
        return si_radius(sys, certificate=certificate, **common)
    if kind == "sd":
        return sd_radius(sys, multistart=multistart, tol=tol, max_iter=max_iter,
                         certificate=certificate, **common)
    raise ValueError(f"unknown radius kind {kind!r}; expected one of {_KINDS}")


class StabilityRadius(BaseEstimator):
    """Stability radius of a DH system for one perturbation class.

    Parameters
    ----------
    kind : {"unstructured", "s", "si", "sd"}
    grid_points : int
        Frequency grid size of the global search.
    interval : tuple or None
        Frequency window; None uses the default symmetric bound.
    refine_tol : float
        Relative frequency tolerance of the local refinement.
    multistart, tol, max_iter
        SCF settings (``kind="sd"`` only).

    Attributes
    ----------
    radius_ : float
    omega_ : float
        Minimizing frequency.
    result_ : RadiusResult
    certificate_ : PerturbationPair or None
    """

    def __init__(self, kind="sd", grid_points=om.DEFAULT_GRID, interval=None, refine_tol=1e-10,
                 multistart=5, tol=SCF_TOL, max_iter=SCF_MAX_ITER):
        self.kind = kind
        self.grid_points = grid_points
        self.interval = interval
        self.refine_tol = refine_tol
        self.multistart = multistart
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y=None):
        sys = as_system(X)
        self.result_ = compute_radius(sys, self.kind, grid_points=self.grid_points, interval=self.interval,
                                      refine_tol=self.refine_tol, multistart=self.multistart,
                                      tol=self.tol, max_iter=self.max_iter)
        self.radius_ = self.result_.value
        self.omega_ = self.result_.omega_star
        self.certificate_ = self.result_.certificate
        self.n_features_in_ = sys.n
        return self

    def score(self, X=None, y=None):
        """The fitted radius (larger means more robust)."""
        check_is_fitted(self, "radius_")
        return self.radius_


class BackwardError(BaseEstimator):
    """Eigenvalue backward error for the class S at a batch of shifts.

    ``fit`` stores the system; ``predict(lambdas)`` returns one backward
    error per shift.
    """

    def __init__(self, xtol=1e-8, ftol=1e-10):
        self.xtol = xtol
        self.ftol = ftol

    def fit(self, X, y=None):
        self.system_ = as_system(X)
        self.n_features_in_ = self.system_.n
        return self

    def predict(self, lambdas):
        check_is_fitted(self, "system_")
        lams = np.atleast_1d(np.asarray(lambdas, dtype=complex)).ravel()
        self.results_ = [eta_s(self.system_, lam, xtol=self.xtol, ftol=self.ftol) for lam in lams]
        return np.array([r.eta for r in self.results_])


class RobustDHRepresentation(TransformerMixin, BaseEstimator):
    """DH representation ``A = J - R`` (``Q = I``) of a stable matrix.

    With ``Z=None`` the dissipation is pushed towards ``|mu| I`` through
    the regularized Lyapunov equation; otherwise the Gram solution of
    ``A^*X + XA = -Z^*Z`` is used.  ``transform`` maps state vectors
    (columns) to the new coordinates ``T x``.

    Attributes
    ----------
    J_, R_, X_, T_ : ndarray
    mu_ : float
        Spectral abscissa of `A`.
    representation_ : RobustRepresentation
    """

    def __init__(self, epsilon=1e-8, Z=None):
        self.epsilon = epsilon
        self.Z = Z

    def fit(self, X, y=None):
        A = check_square_matrix(X, "A")
        if self.Z is None:
            rep = optimal_representation(A, self.epsilon)
        else:
            rep = representation_from_factor(A, self.Z)
        self.representation_ = rep
        self.J_, self.R_, self.X_, self.T_, self.mu_ = rep.J, rep.R, rep.X, rep.T, rep.mu
        self.n_features_in_ = A.shape[0]
        return self

    @property
    def system_(self):
        check_is_fitted(self, "representation_")
        return self.representation_.system

    def transform(self, X):
        check_is_fitted(self, "T_")
        x = check_vectors(X, self.n_features_in_)
        out = self.T_ @ x
        return out.ravel() if np.ndim(X) == 1 else out

    def inverse_transform(self, X):
        check_is_fitted(self, "T_")
        x = check_vectors(X, self.n_features_in_)
        out = np.linalg.solve(self.T_, x)
        return out.ravel() if np.ndim(X) == 1 else out
