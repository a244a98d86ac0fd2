"""Medians, barycenters and the expectation of a map into a Hadamard model space."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    LipschitzMap,
    exp_map,
    hyp_distance,
    log_map,
    minkowski_dot,
    minkowski_norm,
    tangent_coordinates,
)

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200
_WEIGHT_TOL = 1e-12
_OBJ_SLACK = 1e-12


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Weighted point cloud in one model space (rows of ``points``)."""
    points: np.ndarray
    weights: np.ndarray
    space: str = "euclidean"

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("empirical measure needs a nonempty (N, d) point array")
        w = np.array(self.weights, dtype=float).reshape(-1)
        if w.shape[0] != pts.shape[0]:
            raise ValueError("one weight per point required")
        if np.any(w < 0) or abs(w.sum() - 1.0) > _WEIGHT_TOL:
            raise ValueError("weights must be nonnegative and sum to 1")
        if self.space not in ("euclidean", "hyperbolic", "sphere"):
            raise ValueError(f"unknown space {self.space!r}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, points, space="euclidean"):
        pts = np.asarray(points, dtype=float)
        n = pts.shape[0]
        return cls(pts, np.full(n, 1.0 / n) if n else np.zeros(0), space)

    def __len__(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class BarycenterResult:
    point: np.ndarray
    residual: float
    iterations: int
    converged: bool


def median(samples, weights=None):
    """Lower median: the smallest sample value with half the mass on each side."""
    x = np.asarray(samples, dtype=float).reshape(-1)
    if x.size == 0:
        raise ValueError("median of an empty sample")
    order = np.argsort(x, kind="stable")
    xs = x[order]
    if weights is None:
        # exact integer arithmetic: position ceil(N/2) in sorted order
        return float(xs[(x.size + 1) // 2 - 1])
    w = np.asarray(weights, dtype=float).reshape(-1)[order]
    cum = np.cumsum(w) / w.sum()
    k = int(np.searchsorted(cum, 0.5 - _WEIGHT_TOL, side="left"))
    return float(xs[min(k, x.size - 1)])


def euclidean_barycenter(measure: EmpiricalMeasure):
    """Weighted mean of a Euclidean empirical measure."""
    if measure.space != "euclidean":
        raise ValueError("euclidean_barycenter needs a Euclidean measure")
    return measure.weights @ measure.points


def _mean_log(x, points, weights):
    return weights @ log_map(x, points)


def karcher_objective(x, points, weights):
    d = hyp_distance(x, points)
    return float(weights @ (d * d))


def karcher_barycenter(measure: EmpiricalMeasure, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                       check_monotone=False) -> BarycenterResult:
    """Barycenter on H^m by the fixed-point iteration x <- exp_x(sum_k w_k log_x(y_k)).

    Starts from the normalized ambient weighted mean. A full step is taken
    unless it would increase the objective, in which case the step is halved
    (only needed for widely spread clouds).
    """
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    if measure.space != "hyperbolic":
        raise ValueError("karcher_barycenter needs a hyperbolic measure")
    pts, w = measure.points, measure.weights
    mean = w @ pts
    x = mean / math.sqrt(-float(minkowski_dot(mean, mean)))
    x[0] = math.sqrt(1.0 + float(x[1:] @ x[1:]))
    g = _mean_log(x, pts, w)
    res = float(minkowski_norm(g))
    obj = karcher_objective(x, pts, w)
    it = 0
    while res > tol and it < max_iter:
        it += 1
        step = 1.0
        while True:
            cand = exp_map(x, step * g)
            cand_obj = karcher_objective(cand, pts, w)
            # near the minimum the decrease is below round-off; allow that much slack
            if cand_obj <= obj * (1.0 + _OBJ_SLACK) or step < 1e-6:
                break
            step *= 0.5
        if check_monotone and cand_obj > obj * (1.0 + _OBJ_SLACK):
            raise AssertionError(f"Karcher objective increased at iteration {it}: {obj} -> {cand_obj}")
        x, obj = cand, cand_obj
        g = _mean_log(x, pts, w)
        res = float(minkowski_norm(g))
    if res > tol:
        log.warning("Karcher iteration stopped after %d iterations with residual %.3g", it, res)
    return BarycenterResult(point=x, residual=res, iterations=it, converged=res <= tol)


def _push_forward(samples, f: LipschitzMap, weights=None):
    images = f(np.asarray(samples, dtype=float))
    n = images.shape[0]
    w = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float)
    return EmpiricalMeasure(images, w, f.target)


def expectation_of_map(samples, f: LipschitzMap, weights=None, tol=DEFAULT_TOL,
                       max_iter=DEFAULT_MAX_ITER, full_output=False):
    """E(f): barycenter of the push-forward of the empirical source measure.

    With ``full_output`` a BarycenterResult is returned (Euclidean targets
    report residual 0 after zero iterations).
    """
    nu = _push_forward(samples, f, weights)
    if f.target == "euclidean":
        res = BarycenterResult(euclidean_barycenter(nu), 0.0, 0, True)
    elif f.target == "hyperbolic":
        res = karcher_barycenter(nu, tol=tol, max_iter=max_iter)
    else:
        raise ValueError("expectation is only defined for Hadamard targets (euclidean, hyperbolic)")
    return res if full_output else res.point


def reduce_to_tangent(samples, f: LipschitzMap, E, images=None):
    """f0(x) = log_E(f(x)) in an orthonormal frame of T_E N, one row per sample.

    For R^m targets this is just f(x) - E. ``images`` may carry precomputed f(x).
    """
    fx = f(np.asarray(samples, dtype=float)) if images is None else np.asarray(images, dtype=float)
    E = np.asarray(E, dtype=float)
    if f.target == "euclidean":
        return fx - E
    if f.target == "hyperbolic":
        return tangent_coordinates(E, log_map(E, fx))
    raise ValueError("reduction needs a Hadamard target")
