"""Exact spherical measures through the regularized incomplete beta function,
plus the projection-based tube bound and Artstein's asymptotics and brackets.

Convention: S^{n-m} sits inside S^n as the zero set of the first m ambient
coordinates, so d(x, S^{n-m}) = arcsin|P_m x| where P_m keeps those
coordinates. Under the uniform law |P_m x|^2 ~ Beta(m/2, (n+1-m)/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundValue, cor_manifold_tail, manifold_constants
from .special import betainc, log_betainc, vectorize

HALF_PI = 0.5 * math.pi
# log-spaced grid for the unknown constants in (0, 3]
ARTSTEIN_C_GRID = np.geomspace(3e-3, 3.0, 64)


@dataclass(frozen=True)
class TubeQuery:
    n: int
    m: int
    r: float

    def __post_init__(self):
        if not 1 <= self.m <= self.n:
            raise ValueError(f"need 1 <= m <= n (n={self.n}, m={self.m})")
        if not 0.0 <= self.r <= HALF_PI + 1e-15:
            raise ValueError(f"tube radius must lie in [0, pi/2] (r={self.r})")


def reg_inc_beta(a, b, x):
    """I_x(a, b); broadcasts over arrays."""
    return _reg_inc_beta(a, b, x)


_reg_inc_beta = vectorize(betainc)


def _sin2_cos2(r):
    return math.sin(r) ** 2, math.cos(r) ** 2


def _alpha_scalar(n, r):
    if n < 1:
        raise ValueError("sphere dimension must be >= 1")
    if not 0.0 <= r <= HALF_PI + 1e-15:
        raise ValueError("radius must lie in [0, pi/2]")
    s2, c2 = _sin2_cos2(min(r, HALF_PI))
    # 1/2 (1 - I_{sin^2 r}(1/2, n/2)) = 1/2 I_{cos^2 r}(n/2, 1/2)
    return 0.5 * betainc(0.5 * n, 0.5, c2, one_minus_x=s2)


def alpha_sphere_exact(n, r):
    """Concentration function of S^n (hemispheres are extremal)."""
    return _alpha_vec(n, r)


_alpha_vec = vectorize(_alpha_scalar)


def log_alpha_sphere_exact(n, r):
    s2, c2 = _sin2_cos2(min(r, HALF_PI))
    return math.log(0.5) + log_betainc(0.5 * n, 0.5, c2, one_minus_x=s2)


def _tube_scalar(n, m, r):
    q = TubeQuery(int(n), int(m), float(r))
    s2, c2 = _sin2_cos2(min(q.r, HALF_PI))
    return betainc(0.5 * (q.n + 1 - q.m), 0.5 * q.m, c2, one_minus_x=s2)


_tube_vec = vectorize(_tube_scalar)


def tube_complement_exact(n, m=None, r=None):
    """mu(S^n \\ (S^{n-m})_r) = P(arcsin|P_m x| >= r) = 1 - I_{sin^2 r}(m/2, (n+1-m)/2)."""
    if isinstance(n, TubeQuery):
        return _tube_scalar(n.n, n.m, n.r)
    return _tube_vec(n, m, r)


def linear_tail_exact(n, m, t):
    """P(|P_m x| >= t) for uniform x on S^n and 0 <= t <= 1."""
    t = float(t)
    if t <= 0.0:
        return 1.0
    if t >= 1.0:
        return 0.0
    return betainc(0.5 * (n + 1 - m), 0.5 * m, 1.0 - t * t, one_minus_x=t * t)


def cor41_bound(q: TubeQuery | int, m=None, r=None) -> BoundValue:
    """Four-way minimum bounding the tube complement, from the projection onto R^m."""
    if not isinstance(q, TubeQuery):
        q = TubeQuery(int(q), int(m), float(r))
    n, m, r = q.n, q.m, q.r
    k = manifold_constants(m)
    e = 1.0 / (3.0 * math.pi)
    logs = (
        k.log_A - e * math.sqrt(2.0 * n / m) * r,
        k.log_A_tilde - e * math.sqrt(n / (2.0 * m)) * r,
        k.log_B - ((n - 1.0) / (4.0 * math.pi ** 2 * m)) * r * r,
        k.log_B_tilde - ((n - 1.0) / (8.0 * math.pi ** 2 * m)) * r * r,
    )
    return BoundValue.minimum(*logs)


def cor41_via_manifold_bound(q: TubeQuery) -> BoundValue:
    """The same bound rebuilt from the closed-manifold one at radius 2r/pi (sin r >= 2r/pi)."""
    rr = 2.0 * q.r / math.pi
    spectral = cor_manifold_tail("spectral", q.n, q.m, rr)
    ricci = cor_manifold_tail("ricci", q.n - 1, q.m, rr) if q.n > 1 else BoundValue(math.inf)
    return BoundValue.minimum(spectral.log_value, ricci.log_value)


# ---------------------------------------------------------------------------
# Artstein

def artstein_u(r, lam):
    """u(r, lambda) = (1-l) log((1-l)/sin^2 r) + l log(l/cos^2 r) >= 0."""
    if not 0.0 < r < HALF_PI:
        raise ValueError("u(r, lambda) needs 0 < r < pi/2")
    if not 0.0 < lam < 1.0:
        raise ValueError("u(r, lambda) needs 0 < lambda < 1")
    s2, c2 = _sin2_cos2(r)
    return (1.0 - lam) * math.log((1.0 - lam) / s2) + lam * math.log(lam / c2)


@dataclass(frozen=True)
class ArtsteinParams:
    n: int
    lam: float
    r: float
    c: float = 3.0
    c_prime: float = 3.0

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise ValueError("lambda must lie in (0, 1)")
        if not 0.0 < self.r < HALF_PI:
            raise ValueError("r must lie in (0, pi/2)")
        if math.sin(self.r) ** 2 == 1.0 - self.lam:
            raise ValueError("sin^2 r = 1 - lambda is the pole of the asymptotic formula")


def _artstein_term(n, lam, r, absolute):
    s2 = math.sin(r) ** 2
    delta = s2 - (1.0 - lam)
    if delta == 0.0:
        raise ValueError("sin^2 r = 1 - lambda is the pole of the asymptotic formula")
    if absolute:
        delta = abs(delta)
    return math.sqrt(lam * (1.0 - lam)) / (math.sqrt(n * math.pi) * delta) * math.exp(-0.5 * n * artstein_u(r, lam))


def artstein_asymptotic(p: ArtsteinParams | int, lam=None, r=None) -> float:
    """Large-n approximation of mu(S^n \\ (S^{lambda n})_r).

    Returns T when sin^2 r > 1 - lambda and 1 - T otherwise, where
    T = sqrt(l(1-l)) / (sqrt(n pi) |sin^2 r - (1-l)|) exp(-n u / 2).
    """
    if not isinstance(p, ArtsteinParams):
        p = ArtsteinParams(int(p), float(lam), float(r))
    t = _artstein_term(p.n, p.lam, p.r, absolute=True)
    if math.sin(p.r) ** 2 > 1.0 - p.lam:
        return t
    return 1.0 - t


@dataclass(frozen=True)
class Bracket:
    lower: float
    upper: float
    case: int


def _gauss_lower(u, c, log_l):
    s = u + c + log_l
    if s <= 0:
        raise ValueError(f"u + c' + log l' = {s:.6g} <= 0: bracket expression undefined")
    rs = math.sqrt(s)
    return math.exp(-s) / (math.sqrt(2.0 * math.pi) * (1.0 / rs + rs))


def _gauss_upper(u, c, log_l):
    s = u + c + log_l
    if s <= 0:
        raise ValueError(f"u + c + log l = {s:.6g} <= 0: bracket expression undefined")
    return math.exp(-s) / (math.sqrt(2.0 * math.pi) * math.sqrt(s))


def artstein_bracket(n, m, r, c, c_prime) -> Bracket:
    """Lower and upper expressions bracketing mu((S^m)_r), S^m inside S^n, lambda = m/n.

    Case 1 (sin^2 r < 1 - lambda) brackets the measure itself, case 2 brackets
    it as 1 minus the same expressions.
    """
    if n < 6 or not 3 <= m <= n - 3:
        raise ValueError("need n >= 6 and 3 <= m <= n - 3")
    if not (0.0 < c <= 3.0 and 0.0 < c_prime <= 3.0):
        raise ValueError("constants c, c' must lie in (0, 3]")
    lam = m / n
    s2, c2 = _sin2_cos2(r)
    if s2 == 1.0 - lam:
        raise ValueError("sin^2 r = 1 - lambda separates the two cases")
    u = 0.5 * n * artstein_u(r, lam)
    log_l = math.log(s2 / (1.0 - lam))
    log_lp = math.log(c2 / lam)
    lo = _gauss_lower(u, c_prime, log_lp)
    hi = _gauss_upper(u, c, log_l)
    if s2 < 1.0 - lam:
        return Bracket(lo, hi, 1)
    return Bracket(1.0 - lo, 1.0 - hi, 2)


def artstein_envelope(n, m, r, c_grid=ARTSTEIN_C_GRID):
    """[min over c' of lower, max over c of upper], skipping undefined grid points.

    Either end is None when no grid constant gives a defined expression.
    """
    if n < 6 or not 3 <= m <= n - 3:
        raise ValueError("need n >= 6 and 3 <= m <= n - 3")
    lam = m / n
    s2, c2 = _sin2_cos2(r)
    u = 0.5 * n * artstein_u(r, lam)
    log_l = math.log(s2 / (1.0 - lam))
    log_lp = math.log(c2 / lam)
    lows, highs = [], []
    for c in c_grid:
        if u + c + log_lp > 0:
            lows.append(_gauss_lower(u, c, log_lp))
        if u + c + log_l > 0:
            highs.append(_gauss_upper(u, c, log_l))
    if s2 < 1.0 - lam:
        return (min(lows) if lows else None, max(highs) if highs else None)
    # case 2: both ends are 1 - expression
    return (1.0 - max(lows) if lows else None, 1.0 - min(highs) if highs else None)


def tube_measure_exact(n, m, r):
    """mu((S^m)_r) for the m-dimensional great subsphere of S^n.

    Computed directly as I_{sin^2 r}((n-m)/2, (m+1)/2) so tiny tubes do not
    round to zero.
    """
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    s2, c2 = _sin2_cos2(min(r, HALF_PI))
    return betainc(0.5 * (n - m), 0.5 * (m + 1), s2, one_minus_x=c2)


# Largest value the case-2 lower expression can subtract from 1, over every
# c' and every (n, lambda, r): max_s exp(-s) / (sqrt(2 pi) (1/sqrt(s) + sqrt(s)))
# is attained where 2 s^2 + 3 s - 1 = 0.
_S_STAR = (math.sqrt(17.0) - 3.0) / 4.0
LOWER_EXPRESSION_MAX = _gauss_lower(_S_STAR, 0.0, 0.0)
