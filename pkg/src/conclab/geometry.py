"""Model-space geometry: the hyperboloid model of H^m, the unit sphere S^n and R^m.

Points are stored as numpy arrays whose last axis holds ambient coordinates,
so every function here works on a single point or a batch of points alike.
The small dataclasses below wrap single points with their invariants checked.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

# Samples are generated in fixed-size blocks; block b draws from the stream
# SeedSequence(seed, spawn_key=(b,)), so the output never depends on how the
# blocks are distributed across workers.
SAMPLE_BLOCK = 4096
RNG_ALGORITHM = f"numpy.Philox<-SeedSequence(seed, spawn_key=(block,)); block={SAMPLE_BLOCK}; normalized Gaussian"

HYPERBOLOID_TOL = 1e-10
SPHERE_TOL = 1e-12
NEAR_COINCIDENT = 1e-8
DEFAULT_SCALE = math.asinh(1.0)


# ---------------------------------------------------------------------------
# Minkowski primitives

def minkowski_dot(x, y):
    """<x, y>_M = -x0 y0 + sum_i xi yi along the last axis."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.sum(x[..., 1:] * y[..., 1:], axis=-1) - x[..., 0] * y[..., 0]


def minkowski_norm(v):
    """Norm of a (spacelike) tangent vector; tiny negative round-off clips to 0."""
    return np.sqrt(np.maximum(minkowski_dot(v, v), 0.0))


def origin(m):
    o = np.zeros(m + 1)
    o[0] = 1.0
    return o


def to_hyperboloid(spatial):
    """Lift spatial coordinates (x1..xm) onto the upper sheet."""
    spatial = np.asarray(spatial, dtype=float)
    x0 = np.sqrt(1.0 + np.sum(spatial * spatial, axis=-1, keepdims=True))
    return np.concatenate([x0, spatial], axis=-1)


def renormalize(x):
    """Project ambient coordinates back onto the upper sheet (drift control)."""
    return to_hyperboloid(np.asarray(x, dtype=float)[..., 1:])


def _check_finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise ValueError("non-finite coordinates")


def _sq_chord(x, y):
    # <x-y, x-y>_M = -2 - 2<x,y>_M, computed from the difference to avoid cancellation
    diff = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    return np.maximum(minkowski_dot(diff, diff), 0.0)


def hyp_distance(x, y):
    """Geodesic distance acosh(-<x,y>_M), evaluated as 2 asinh(|x-y|_M / 2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_finite(x, y)
    return 2.0 * np.arcsinh(0.5 * np.sqrt(_sq_chord(x, y)))


def _sinhc(t):
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < 1e-4
    safe = np.where(small, 1.0, t)
    return np.where(small, 1.0 + t * t / 6.0, np.sinh(safe) / safe)


def exp_map(x, v):
    """Exponential map of H^m at x applied to the tangent vector v."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_finite(x, v)
    scale = np.maximum(np.abs(x[..., 0]), 1.0)
    if np.any(np.abs(minkowski_dot(x, v)) > 1e-8 * scale * np.maximum(1.0, minkowski_norm(v))):
        raise ValueError("tangent vector is not based at x (<x, v>_M != 0)")
    t = minkowski_norm(v)[..., None]
    y = np.cosh(t) * x + _sinhc(t) * v
    y = renormalize(y)
    # exp_x(0) = x exactly
    return np.where(t == 0.0, x, y)


def log_map(x, y):
    """Inverse exponential map: the tangent vector at x pointing to y with length d(x, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_finite(x, y)
    sq = _sq_chord(x, y)
    # y + <x,y>x rewritten as (y - x) - (|y-x|_M^2 / 2) x
    u = (y - x) - 0.5 * sq[..., None] * x
    # remove any residual normal component
    u = u + minkowski_dot(x, u)[..., None] * x
    d = 2.0 * np.arcsinh(0.5 * np.sqrt(sq))
    unorm = minkowski_norm(u)
    near = 0.5 * sq < NEAR_COINCIDENT
    safe_norm = np.where(unorm > 0.0, unorm, 1.0)
    # first-order branch near coincidence: d / sinh d = 1 - d^2/6 + ...
    factor = np.where(near, 1.0 - d * d / 6.0, d / safe_norm)
    factor = np.where(unorm > 0.0, factor, 0.0)
    return factor[..., None] * u


def sample_sphere(n, count, seed, threads=1):
    """``count`` uniform points on S^n as an array of shape (count, n + 1).

    Pure function of (n, count, seed); ``threads`` only changes speed.
    """
    if n < 1:
        raise ValueError("sphere dimension must be >= 1")
    if count < 0:
        raise ValueError("sample count must be >= 0")
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    out = np.empty((count, n + 1))
    nblocks = -(-count // SAMPLE_BLOCK)

    def fill(block):
        lo = block * SAMPLE_BLOCK
        hi = min(lo + SAMPLE_BLOCK, count)
        ss = np.random.SeedSequence(seed, spawn_key=(block,))
        gen = np.random.Generator(np.random.Philox(ss))
        g = gen.standard_normal((hi - lo, n + 1))
        out[lo:hi] = g / np.linalg.norm(g, axis=1, keepdims=True)

    if threads <= 1 or nblocks <= 1:
        for b in range(nblocks):
            fill(b)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, range(nblocks)))
    return out


def sphere_distance(x, y):
    """Great-circle distance on the unit sphere, in [0, pi]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    # 2 asin(|x-y|/2) stays accurate for nearly equal and nearly antipodal pairs
    chord = np.linalg.norm(y - x, axis=-1)
    return 2.0 * np.arcsin(np.clip(0.5 * chord, 0.0, 1.0))


def euclidean_distance(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.linalg.norm(y - x, axis=-1)


def project_to_Rm(x, m):
    """First m ambient coordinates of sphere point(s) x."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1] - 1
    if not 1 <= m <= n:
        raise ValueError(f"projection target dimension must satisfy 1 <= m <= n (m={m}, n={n})")
    return x[..., :m].copy()


def hyperbolic_embed(z, scale=DEFAULT_SCALE):
    """g_c(z) = exp_o(c z): radial geodesic embedding of R^m into H^m."""
    if not scale > 0:
        raise ValueError("embedding scale must be positive")
    z = np.asarray(z, dtype=float)
    rho = np.linalg.norm(z, axis=-1, keepdims=True)
    t = scale * rho
    spatial = scale * _sinhc(t) * z
    return np.concatenate([np.cosh(t), spatial], axis=-1)


def embed_lipschitz_constant(scale, radius=1.0):
    """Lipschitz constant of g_c on the Euclidean ball of the given radius."""
    return max(scale, math.sinh(scale * radius) / radius)


def tangent_coordinates(base, v):
    """Express tangent vectors at ``base`` in an orthonormal frame of T_base H^m.

    Applies the Lorentz boost carrying ``base`` to the origin and drops the time
    coordinate, so the Euclidean norm of the result equals the Minkowski norm of v.
    """
    base = np.asarray(base, dtype=float)
    v = np.asarray(v, dtype=float)
    b0 = base[0]
    bs = base[1:]
    v0 = v[..., 0]
    vs = v[..., 1:]
    # inverse boost: [[b0, -bs^T], [-bs, I + bs bs^T / (1 + b0)]]
    return -bs * v0[..., None] + vs + np.outer(vs @ bs, bs).reshape(vs.shape) / (1.0 + b0)


# ---------------------------------------------------------------------------
# Typed single points

@dataclass(frozen=True)
class HyperbolicPoint:
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        _check_finite(c)
        if c.ndim != 1 or c.size < 2:
            raise ValueError("hyperbolic point needs a 1-d coordinate vector of length m + 1")
        if abs(minkowski_dot(c, c) + 1.0) > HYPERBOLOID_TOL * max(1.0, c[0] * c[0]):
            raise ValueError("point is not on the hyperboloid <x,x>_M = -1")
        if c[0] < 1.0 - HYPERBOLOID_TOL:
            raise ValueError("point is not on the upper sheet")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def dim(self):
        return self.coords.size - 1

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


@dataclass(frozen=True)
class TangentVector:
    base: HyperbolicPoint
    vec: np.ndarray

    def __post_init__(self):
        v = np.array(self.vec, dtype=float)
        _check_finite(v)
        if v.shape != self.base.coords.shape:
            raise ValueError("tangent vector and base point dimensions differ")
        if abs(minkowski_dot(self.base.coords, v)) > HYPERBOLOID_TOL * max(1.0, self.base.coords[0]) * max(1.0, float(minkowski_norm(v))):
            raise ValueError("vector is not Minkowski-orthogonal to its base point")
        v.setflags(write=False)
        object.__setattr__(self, "vec", v)

    def norm(self):
        return float(minkowski_norm(self.vec))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.vec, dtype=dtype)


@dataclass(frozen=True)
class SpherePoint:
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        _check_finite(c)
        if c.ndim != 1 or c.size < 2:
            raise ValueError("sphere point needs a 1-d coordinate vector of length n + 1")
        if abs(np.linalg.norm(c) - 1.0) > SPHERE_TOL:
            raise ValueError("sphere point must have unit Euclidean norm")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def dim(self):
        return self.coords.size - 1

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


# ---------------------------------------------------------------------------
# Lipschitz maps between model spaces

SPACES = ("sphere", "euclidean", "hyperbolic")

METRICS: dict[str, Callable] = {
    "sphere": sphere_distance,
    "euclidean": euclidean_distance,
    "hyperbolic": hyp_distance,
}


@dataclass(frozen=True)
class LipschitzMap:
    """A map between model spaces together with its declared Lipschitz bound.

    ``func`` acts on batches: an array (..., source_dim) -> (..., target_dim).
    """
    kind: str
    func: Callable[[np.ndarray], np.ndarray]
    source: str
    target: str
    lipschitz: float = 1.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.source not in SPACES or self.target not in SPACES:
            raise ValueError(f"unknown space in {self.source!r} -> {self.target!r}")
        if not self.lipschitz >= 0:
            raise ValueError("declared Lipschitz bound must be nonnegative")

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def then(self, other: "LipschitzMap") -> "LipschitzMap":
        """Composition ``other after self``."""
        if other.source != self.target:
            raise ValueError(f"cannot compose {self.target!r} output with {other.source!r} input")
        f, g = self.func, other.func
        return LipschitzMap(
            kind=f"{other.kind}∘{self.kind}",
            func=lambda x: g(f(x)),
            source=self.source,
            target=other.target,
            lipschitz=self.lipschitz * other.lipschitz,
            params={"inner": self.params, "outer": other.params},
        )

    def source_metric(self, x, y):
        return METRICS[self.source](x, y)

    def target_metric(self, x, y):
        return METRICS[self.target](x, y)


def projection(m):
    """(x1, ..., x_{n+1}) -> (x1, ..., xm), S^n -> R^m."""
    return LipschitzMap("projection", lambda x: project_to_Rm(x, m), "sphere", "euclidean", 1.0, {"m": m})


def coordinate(i, source="sphere"):
    """The i-th ambient coordinate (0-based) as a map into R^1."""
    return LipschitzMap("coordinate", lambda x: x[..., i:i + 1].copy(), source, "euclidean", 1.0, {"i": i})


def hyperbolic_embedding(scale=DEFAULT_SCALE):
    """g_c : unit ball of R^m -> H^m; the declared constant holds on the unit ball."""
    return LipschitzMap("hyperbolic_embed", lambda z: hyperbolic_embed(z, scale), "euclidean", "hyperbolic",
                        embed_lipschitz_constant(scale), {"scale": scale})


def homothety(factor, space="euclidean"):
    return LipschitzMap("homothety", lambda x: factor * x, space, space, abs(factor), {"factor": factor})


def identity(space="euclidean"):
    return LipschitzMap("identity", lambda x: x.copy(), space, space, 1.0)


def constant(value, source="sphere", target="euclidean"):
    value = np.asarray(value, dtype=float)

    def func(x):
        return np.broadcast_to(value, x.shape[:-1] + value.shape).copy()

    return LipschitzMap("constant", func, source, target, 0.0, {"value": value.tolist()})


def estimate_lipschitz(f: LipschitzMap, samples, max_pairs=None, chunk=256):
    """Largest ratio d_target(f(x), f(y)) / d_source(x, y) over sampled pairs.

    Uses every unordered pair unless ``max_pairs`` is given, in which case the
    disjoint consecutive pairs (x0, x1), (x2, x3), ... are used. Coincident
    pairs are skipped. A lower bound for the true constant.
    """
    x = np.asarray(samples, dtype=float)
    if x.shape[0] < 2:
        raise ValueError("need at least two samples")
    fx = f(x)
    best = 0.0
    if max_pairs is not None:
        k = min(max_pairs, x.shape[0] // 2)
        ds = f.source_metric(x[0:2 * k:2], x[1:2 * k:2])
        dt = f.target_metric(fx[0:2 * k:2], fx[1:2 * k:2])
        ok = ds > 0
        return float(np.max(dt[ok] / ds[ok])) if np.any(ok) else 0.0
    n = x.shape[0]
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        ds = f.source_metric(x[lo:hi, None, :], x[None, :, :])
        dt = f.target_metric(fx[lo:hi, None, :], fx[None, :, :])
        ok = ds > 0
        if np.any(ok):
            best = max(best, float(np.max(dt[ok] / ds[ok])))
    return best
