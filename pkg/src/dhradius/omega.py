"""Global minimization over the frequency ``omega``.

All four radii are infima over ``omega`` of an inner quantity.  The search
evaluates a uniform grid together with eigenvalue seeds, then polishes the
cells around the three best discrete local minima with a bounded
golden-section/parabolic (Brent) search.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import AllEvaluationsFailed, DHRadiusError
from .linalg import spectral_norm

log = logging.getLogger(__name__)

DEFAULT_GRID = 401


@dataclass
class OmegaProblem:
    objective: Callable[[float], float]
    interval: tuple[float, float]
    seeds: Sequence[float] = ()
    grid_points: int = DEFAULT_GRID
    refine_tol: float = 1e-10

    def __post_init__(self):
        lo, hi = map(float, self.interval)
        if not lo < hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        if self.grid_points < 33:
            raise ValueError("grid_points must be at least 33")
        if self.refine_tol <= 0:
            raise ValueError("refine_tol must be positive")
        self.interval = (lo, hi)
        self.seeds = [min(max(float(s), lo), hi) for s in self.seeds]


@dataclass
class OmegaMinimum:
    omega: float
    value: float
    evaluations: int
    failures: int = 0
    samples: dict = field(default_factory=dict, repr=False)


def default_interval(sys) -> tuple[float, float]:
    """Symmetric frequency window ``[-W, W]``.

    ``(0, -R)`` is an admissible S_d perturbation of norm ``||R||``, so any
    optimal perturbed matrix has norm at most ``W = (||J - R|| + sqrt(2) ||R||) ||Q||``,
    which bounds the imaginary part of the eigenvalue it places.
    """
    W = (spectral_norm(sys.J - sys.R) + math.sqrt(2.0) * spectral_norm(sys.R)) * spectral_norm(sys.Q)
    if W <= 0.0:
        W = 1.0
    return (-W, W)


def seed_frequencies(sys, interval=None) -> list[float]:
    """Imaginary parts of the eigenvalues of ``(J - R)Q`` and ``JQ``, deduplicated."""
    lo, hi = interval if interval is not None else default_interval(sys)
    W = max(abs(lo), abs(hi))
    cand = np.concatenate([np.linalg.eigvals(sys.A).imag, np.linalg.eigvals(sys.J @ sys.Q).imag])
    cand = np.sort(cand)
    out: list[float] = []
    spacing = 1e-8 * (1.0 + W)
    for w in cand:
        if not out or w - out[-1] > spacing:
            out.append(float(w))
    return out


def _safe(objective, w, counter):
    try:
        val = float(objective(w))
    except (DHRadiusError, np.linalg.LinAlgError, FloatingPointError, ValueError) as exc:
        log.warning("omega objective failed at %.6g: %s", w, exc)
        counter[0] += 1
        return math.inf
    if math.isnan(val):
        counter[0] += 1
        return math.inf
    return val


def minimize(problem: OmegaProblem, n_refine: int = 3) -> OmegaMinimum:
    """Minimize ``problem.objective`` over ``problem.interval``.

    Failed evaluations count as ``+inf``.  The returned value never
    exceeds the best raw grid or seed evaluation.
    """
    lo, hi = problem.interval
    obj = problem.objective
    fails = [0]
    samples: dict[float, float] = {}

    def f(w):
        w = float(w)
        if w not in samples:
            samples[w] = _safe(obj, w, fails)
        return samples[w]

    pts = np.unique(np.concatenate([np.linspace(lo, hi, problem.grid_points), np.asarray(problem.seeds, dtype=float)]))
    vals = np.array([f(w) for w in pts])
    if not np.any(np.isfinite(vals)):
        raise AllEvaluationsFailed(f"objective failed at all {pts.size} sample points")

    # discrete local minima of the sampled curve, best first
    padded = np.concatenate([[math.inf], vals, [math.inf]])
    is_min = (padded[1:-1] <= padded[:-2]) & (padded[1:-1] <= padded[2:]) & np.isfinite(vals)
    cand = np.flatnonzero(is_min)
    cand = cand[np.argsort(vals[cand], kind="stable")][:n_refine]

    for k in cand:
        a = pts[max(k - 1, 0)]
        b = pts[min(k + 1, pts.size - 1)]
        if b <= a:
            continue
        xatol = problem.refine_tol * (1.0 + abs(pts[k]))
        with np.errstate(invalid="ignore", over="ignore"):
            # failed (+inf) samples make Brent's parabola step NaN; it falls back to golden section
            minimize_scalar(f, bounds=(a, b), method="bounded", options={"xatol": xatol, "maxiter": 200})

    w_best = min(samples, key=lambda w: (samples[w], abs(w)))
    return OmegaMinimum(
        omega=w_best,
        value=samples[w_best],
        evaluations=len(samples),
        failures=fails[0],
        samples=samples,
    )


def search(sys, objective, *, grid_points: int = DEFAULT_GRID, interval: Optional[tuple] = None,
           refine_tol: float = 1e-10, extra_seeds: Sequence[float] = ()) -> OmegaMinimum:
    """Run :func:`minimize` on the default window and seeds of `sys`."""
    interval = default_interval(sys) if interval is None else interval
    seeds = list(seed_frequencies(sys, interval)) + list(extra_seeds)
    return minimize(OmegaProblem(objective, interval, seeds, grid_points, refine_tol))
