"""Seeded Monte-Carlo experiments on uniform spheres.

An experiment samples S^n, pushes the sample through a 1-Lipschitz map into
R^m or H^m, takes the expectation (barycenter) of the image, and compares the
empirical tails and moments of d(f(x), E f) with the exact laws and with every
applicable closed-form bound.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bounds as B
from .barycenter import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    EmpiricalMeasure,
    euclidean_barycenter,
    karcher_barycenter,
    median,
    reduce_to_tangent,
)
from .geometry import (
    DEFAULT_SCALE,
    RNG_ALGORITHM,
    LipschitzMap,
    hyperbolic_embedding,
    projection,
    sample_sphere,
)
from .sphere_exact import alpha_sphere_exact, cor41_bound, linear_tail_exact, tube_complement_exact

SIGMAS = 4.0
MIN_EXPECTED_HITS = 10
DEFAULT_PAIR_CAP = 2000
DEFAULT_Q = (1.0, 2.0, 4.0)


def default_r_grid(points=50):
    return tuple(float(r) for r in np.linspace(math.pi / (2 * points), math.pi / 2, points))


def binomial_slack(p_hat, count, sigmas=SIGMAS):
    """sigmas * sqrt(p (1 - p) / count)."""
    p_hat = np.asarray(p_hat, dtype=float)
    return sigmas * np.sqrt(np.clip(p_hat * (1.0 - p_hat), 0.0, None) / count)


# ---------------------------------------------------------------------------
# Empirical quantities

def tail_counts(values, r_grid):
    """Number of entries >= r for each r (integer array)."""
    v = np.sort(np.asarray(values, dtype=float).reshape(-1))
    return v.size - np.searchsorted(v, np.asarray(r_grid, dtype=float), side="left")


def _target_distances(f: LipschitzMap, images, E):
    return f.target_metric(images, np.asarray(E, dtype=float))


def empirical_tail(samples, f: LipschitzMap, E, r_grid, images=None):
    """Fraction of samples with d_N(f(x), E) >= r, per grid radius."""
    fx = f(samples) if images is None else np.asarray(images, dtype=float)
    d = _target_distances(f, fx, E)
    return tail_counts(d, r_grid) / d.shape[0]


@dataclass(frozen=True)
class Moments:
    q: float
    V: float            # V_q over the full sample
    V_sub: float        # V_q over the pair subsample
    V_tilde: float      # two-point moment over all ordered pairs of the subsample
    centering: float    # |mean f0| over the subsample
    moment_sd: float    # standard deviation of |f0|^q over the full sample


def _pair_norms(points, chunk=500):
    """|p_i - p_j| for all ordered pairs (i, j), flattened."""
    k = points.shape[0]
    out = np.empty((k, k))
    for lo in range(0, k, chunk):
        hi = min(lo + chunk, k)
        out[lo:hi] = np.linalg.norm(points[lo:hi, None, :] - points[None, :, :], axis=-1)
    return out.reshape(-1)


def empirical_moments(f0, q_list=DEFAULT_Q, pair_cap=DEFAULT_PAIR_CAP):
    """V_q and the two-point moment V~_q of the reduced map f0 (rows = samples).

    V~_q uses every ordered pair of the first ``pair_cap`` samples.
    """
    f0 = np.asarray(f0, dtype=float)
    if f0.ndim == 1:
        f0 = f0[:, None]
    norms = np.linalg.norm(f0, axis=1)
    sub = f0[:pair_cap]
    sub_norms = norms[:pair_cap]
    pairs = _pair_norms(sub)
    centering = float(np.linalg.norm(sub.mean(axis=0)))
    out = []
    for q in q_list:
        if q < 1:
            raise ValueError("moment order q must be >= 1")
        nq = norms ** q
        out.append(Moments(
            q=float(q),
            V=float(np.mean(nq) ** (1.0 / q)),
            V_sub=float(np.mean(sub_norms ** q) ** (1.0 / q)),
            V_tilde=float(np.mean(pairs ** q) ** (1.0 / q)),
            centering=centering,
            moment_sd=float(np.std(nq)),
        ))
    return out


def median_deviation_tail(samples, phi, r_grid):
    """Fraction of samples with |phi(x) - m_phi| >= r, m_phi the lower median."""
    v = np.asarray(phi(samples) if callable(phi) else samples, dtype=float).reshape(-1)
    return tail_counts(np.abs(v - median(v)), r_grid) / v.size


def two_point_deviation_tail(samples, phi, r_grid, pair_cap=DEFAULT_PAIR_CAP):
    """Fraction of ordered pairs (x, y) of the subsample with |phi(x) - phi(y)| >= r."""
    v = np.asarray(phi(samples) if callable(phi) else samples, dtype=float).reshape(-1)[:pair_cap]
    diffs = np.abs(v[:, None] - v[None, :]).reshape(-1)
    return tail_counts(diffs, r_grid) / diffs.size


def first_coordinate(x):
    return np.asarray(x, dtype=float)[..., 0]


# ---------------------------------------------------------------------------
# Experiment configuration and report

MAPS = ("proj", "hyp")
PROFILES = ("gaussian", "exponential")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    m: int
    map: str = "proj"
    samples: int = 100_000
    seed: int = 0
    scale: float = DEFAULT_SCALE
    r_grid: tuple = field(default_factory=default_r_grid)
    q_list: tuple = DEFAULT_Q
    profile: str = "gaussian"
    pair_cap: int = DEFAULT_PAIR_CAP
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("sphere dimension n must be >= 2")
        if not 1 <= self.m <= self.n:
            raise ValueError("need 1 <= m <= n")
        if self.map not in MAPS:
            raise ValueError(f"map must be one of {MAPS}")
        if self.profile not in PROFILES:
            raise ValueError(f"profile must be one of {PROFILES}")
        if self.samples < 100:
            raise ValueError("at least 100 samples required")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        r = np.asarray(self.r_grid, dtype=float)
        if r.size == 0 or np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise ValueError("r_grid must be nonempty, positive and strictly increasing")
        if any(q < 1 for q in self.q_list):
            raise ValueError("moment orders must be >= 1")
        object.__setattr__(self, "r_grid", tuple(float(x) for x in r))
        object.__setattr__(self, "q_list", tuple(float(q) for q in self.q_list))

    def lipschitz_map(self) -> LipschitzMap:
        f = projection(self.m)
        return f if self.map == "proj" else f.then(hyperbolic_embedding(self.scale))

    def concentration_profile(self) -> B.ConcentrationProfile:
        if self.profile == "gaussian":
            return B.ConcentrationProfile.sphere_gaussian(self.n)
        return B.ConcentrationProfile.sphere_exponential(self.n)

    def to_dict(self):
        return asdict(self)


def standard_configs(seed=0, samples=100_000):
    """The standard matrix: n in {20, 50}, m in {1, 2, 5}, both maps."""
    return [ExperimentConfig(n=n, m=m, map=mp, samples=samples, seed=seed)
            for n in (20, 50) for m in (1, 2, 5) for mp in MAPS]


@dataclass
class VerificationReport:
    config: dict
    rows: list
    lemma_rows: list
    moment_rows: list
    checks: dict
    violations: list
    rng: dict

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return asdict(self)


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def run_verification(config: ExperimentConfig, threads=1) -> VerificationReport:
    """Sample, map, take the expectation, reduce, and compare against every bound."""
    n, m, N = config.n, config.m, config.samples
    r_grid = np.asarray(config.r_grid)
    profile = config.concentration_profile()
    gauss = B.ConcentrationProfile.sphere_gaussian(n)
    expo = B.ConcentrationProfile.sphere_exponential(n)
    f = config.lipschitz_map()

    x = sample_sphere(n, N, config.seed, threads=threads)
    images = f(x)
    nu = EmpiricalMeasure.uniform(images, f.target)
    if f.target == "hyperbolic":
        bary = karcher_barycenter(nu, tol=config.tol, max_iter=config.max_iter)
        E, residual, iters, converged = bary.point, bary.residual, bary.iterations, bary.converged
    else:
        E, residual, iters, converged = euclidean_barycenter(nu), 0.0, 0, True

    dist = _target_distances(f, images, E)
    f0 = reduce_to_tangent(x, f, E, images=images)
    f0_norm = np.linalg.norm(f0, axis=1)
    counts_d = tail_counts(dist, r_grid)
    counts_f0 = tail_counts(f0_norm, r_grid)
    tube_dist = np.arcsin(np.clip(np.linalg.norm(x[:, :m], axis=1), 0.0, 1.0))
    tube_counts = tail_counts(tube_dist, r_grid)

    violations = []

    def judge(section, key, value, empirical, bound, expected, count):
        slack = float(binomial_slack(empirical, count))
        if expected * count >= MIN_EXPECTED_HITS and empirical > bound + slack:
            violations.append({"section": section, "key": key, "value": _num(value), "empirical": _num(empirical),
                               "bound": _num(bound), "slack": slack})

    # exact law of d(f(x), E) when E sits at the symmetric center
    radial = 1.0 if config.map == "proj" else config.scale
    rows = []
    for i, r in enumerate(r_grid):
        emp = counts_d[i] / N
        exact = linear_tail_exact(n, m, r / radial)
        b_main = B.thm_main_tail(profile, m, r).value
        b_gauss = B.thm_main_tail(gauss, m, r).value
        b_expo = B.thm_main_tail(expo, m, r).value
        b_gromov = B.gromov_bound(n, m, r).value
        b_spec = B.cor_manifold_tail("spectral", n, m, r).value
        b_ricci = B.cor_manifold_tail("ricci", n - 1, m, r).value
        tube_ok = r <= math.pi / 2
        tube_emp = tube_counts[i] / N
        tube_exact = float(tube_complement_exact(n, m, r)) if tube_ok else None
        b_cor41 = cor41_bound(n, m, r).value if tube_ok else None
        margin = min(b_main, b_gromov) - emp
        rows.append({
            "r": float(r), "empirical": _num(emp), "exact": _num(exact),
            "bound_thm_main": _num(b_main), "bound_gromov": _num(b_gromov), "bound_cor41": _num(b_cor41),
            "margin": _num(margin),
            "bound_thm_gaussian": _num(b_gauss), "bound_thm_exponential": _num(b_expo),
            "bound_cor12_spectral": _num(b_spec), "bound_cor12_ricci": _num(b_ricci),
            "count": int(counts_d[i]), "count_f0": int(counts_f0[i]),
            "tube_empirical": _num(tube_emp), "tube_exact": _num(tube_exact),
        })
        ref = max(exact, emp)
        for name, b in (("thm_main", b_main), ("thm_gaussian", b_gauss), ("thm_exponential", b_expo),
                        ("gromov", b_gromov), ("cor12_spectral", b_spec), ("cor12_ricci", b_ricci)):
            judge(f"tail:{name}", "r", r, emp, b, ref, N)
        if tube_ok:
            judge("tube:cor41", "r", r, tube_emp, b_cor41, max(tube_exact, tube_emp), N)

    # real-valued 1-Lipschitz test function: the first ambient coordinate
    phi = first_coordinate(x)
    k_pairs = min(config.pair_cap, N)
    med_tail = median_deviation_tail(phi, None, r_grid)
    pair_tail = two_point_deviation_tail(phi, None, r_grid, config.pair_cap)
    centered_tail = tail_counts(np.abs(phi - phi.mean()), r_grid) / N
    lemma_rows = []
    for i, r in enumerate(r_grid):
        a_r = float(alpha_sphere_exact(n, min(r, math.pi / 2)))
        a_half = float(alpha_sphere_exact(n, min(r / 2, math.pi / 2)))
        b_med = min(1.0, 2.0 * a_r)
        b_pair = B.two_point_tail_bound(lambda t: float(alpha_sphere_exact(n, min(t, math.pi / 2))), r)
        b_l23 = B.lemma23_bound(profile, r).value
        lemma_rows.append({
            "r": float(r),
            "median_deviation": _num(med_tail[i]), "bound_median": _num(b_med),
            "two_point": _num(pair_tail[i]), "bound_two_point": _num(b_pair),
            "mean_deviation": _num(centered_tail[i]), "bound_lemma23": _num(b_l23),
            "alpha_exact": _num(a_r), "alpha_exact_half": _num(a_half),
        })
        judge("lemma:median", "r", r, med_tail[i], b_med, max(b_med, med_tail[i]), N)
        judge("lemma:two_point", "r", r, pair_tail[i], b_pair, max(b_pair, pair_tail[i]), k_pairs)
        judge("lemma:lemma23", "r", r, centered_tail[i], b_l23, centered_tail[i], N)

    moment_rows = []
    for mo in empirical_moments(f0, config.q_list, config.pair_cap):
        q = mo.q
        b1 = B.vq_bound_first(profile, m, q)
        b2 = B.vq_bound_second(profile, m, q)
        vq_q = mo.V ** q
        slack = SIGMAS * mo.moment_sd / math.sqrt(N)
        moment_rows.append({
            "q": q, "V_q": mo.V, "V_q_subsample": mo.V_sub, "V_tilde_q": mo.V_tilde,
            "centering_residual": mo.centering, "V_q_power": vq_q,
            "bound_first": _num(b1), "bound_second": _num(b2), "slack": slack,
        })
        for name, b in (("moment:first", b1), ("moment:second", b2)):
            if vq_q > b + slack:
                violations.append({"section": name, "key": "q", "value": q, "empirical": vq_q,
                                   "bound": _num(b), "slack": slack})
        if mo.V_sub > mo.V_tilde + mo.centering + 1e-12:
            violations.append({"section": "moment:two_point_domination", "key": "q", "value": q,
                               "empirical": mo.V_sub, "bound": mo.V_tilde, "slack": mo.centering})

    v2 = float(np.sqrt(np.mean(f0_norm ** 2)))
    drift = float(np.linalg.norm(f0.mean(axis=0)))
    drift_limit = config.tol + 6.0 * v2 / math.sqrt(N)
    identity_ok = bool(np.array_equal(counts_d, counts_f0))
    try:
        r_star = B.crossover_radius(expo, n, m)
    except ArithmeticError:
        r_star = None
    checks = {
        "expectation": [float(c) for c in E],
        "barycenter_residual": float(residual),
        "barycenter_iterations": int(iters),
        "barycenter_converged": bool(converged),
        "tail_identity": identity_ok,
        "mean_f0_norm": drift,
        "mean_f0_limit": drift_limit,
        "crossover_radius_exponential_vs_gromov": _num(r_star),
        "lipschitz_declared": float(f.lipschitz),
    }
    if not converged:
        violations.append({"section": "check:barycenter_converged", "key": "iterations", "value": iters,
                           "empirical": residual, "bound": config.tol, "slack": 0.0})
    if not identity_ok:
        violations.append({"section": "check:tail_identity", "key": "r", "value": None,
                           "empirical": None, "bound": None, "slack": 0.0})
    if drift > drift_limit:
        violations.append({"section": "check:expectation_drift", "key": "norm", "value": None,
                           "empirical": drift, "bound": drift_limit, "slack": 0.0})

    return VerificationReport(
        config=config.to_dict(), rows=rows, lemma_rows=lemma_rows, moment_rows=moment_rows,
        checks=checks, violations=violations,
        rng={"seed": int(config.seed), "algorithm": RNG_ALGORITHM},
    )
