"""Closed-form tail and moment bounds for maps out of spaces with exponential or
Gaussian concentration, evaluated in the log domain.

Every probability bound is returned as a :class:`BoundValue`, which keeps the
natural log of the right-hand side and clamps the probability to [0, 1].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .special import log_gammaincc

LOG_SQRT_PI = 0.5 * math.log(math.pi)


class UnsupportedExponentError(ValueError):
    """Raised when a bound is only proven for p in {1, 2}."""


@dataclass(frozen=True)
class ConcentrationProfile:
    """alpha_X(r) <= C_X exp(-c_X r^p)."""
    C_X: float
    c_X: float
    p: float

    def __post_init__(self):
        if not (self.C_X > 0 and self.c_X > 0 and self.p > 0):
            raise ValueError(f"profile constants must be positive (got {self})")

    def log_alpha(self, r):
        return math.log(self.C_X) - self.c_X * r ** self.p

    def alpha(self, r):
        return min(1.0, math.exp(self.log_alpha(r)))

    @classmethod
    def sphere_exponential(cls, n):
        """alpha_M(r) <= exp(-sqrt(lambda_1) r / 3) with lambda_1(S^n) = n."""
        return cls(1.0, math.sqrt(n) / 3.0, 1.0)

    @classmethod
    def sphere_gaussian(cls, n):
        """alpha_M(r) <= exp(-kappa r^2 / 2) with Ric(S^n) = n - 1."""
        return cls(1.0, (n - 1) / 2.0, 2.0)


@dataclass(frozen=True)
class BoundValue:
    log_value: float

    @property
    def value(self) -> float:
        if self.log_value >= 0.0:
            return 1.0
        return math.exp(self.log_value)

    def __float__(self):
        return self.value

    @staticmethod
    def minimum(*logs) -> "BoundValue":
        return BoundValue(float(min(logs)))


def _exp_or_inf(log_value):
    return math.exp(log_value) if log_value < 709.0 else math.inf


def _log1p_exp(t):
    # log(1 + e^t)
    return t + math.log1p(math.exp(-t)) if t > 0 else math.log1p(math.exp(t))


# ---------------------------------------------------------------------------
# Gamma-type constants

def k_p(p):
    """K_p = int_0^inf exp(-r^p) dr = Gamma(1/p) / p."""
    if not p > 0:
        raise ValueError("K_p requires p > 0")
    return math.gamma(1.0 / p) / p


def m_alpha(alpha):
    """M_alpha = int |s|^alpha d gamma_1(s) = 2^(alpha/2) Gamma((alpha+1)/2) / sqrt(pi)."""
    if not alpha > -1:
        raise ValueError("M_alpha requires alpha > -1")
    return math.exp(0.5 * alpha * math.log(2.0) - LOG_SQRT_PI + math.lgamma(0.5 * (alpha + 1.0)))


def log_gauss_abs_moment(m, q):
    return 0.5 * q * math.log(2.0) + math.lgamma(0.5 * (m + q)) - math.lgamma(0.5 * m)


def gauss_abs_moment(m, q):
    """E|Z|^q for a standard Gaussian vector Z in R^m (chi-distribution moment)."""
    if m < 1 or q < 0:
        raise ValueError("need m >= 1 and q >= 0")
    return math.exp(log_gauss_abs_moment(m, q))


# ---------------------------------------------------------------------------
# Lemma-level bounds

def _log_median_shift_prefactor(profile: ConcentrationProfile):
    # log max{exp(2 (C K_p)^p), 2 C exp((2 C K_p)^p)}
    ck = profile.C_X * k_p(profile.p)
    return max(2.0 * ck ** profile.p, math.log(2.0 * profile.C_X) + (2.0 * ck) ** profile.p)


def lemma23_bound(profile: ConcentrationProfile, r) -> BoundValue:
    """Tail of a mean-zero 1-Lipschitz function: prefactor * exp(-2^(1-p) c_X r^p)."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    p = profile.p
    return BoundValue(_log_median_shift_prefactor(profile) - 2.0 ** (1.0 - p) * profile.c_X * r ** p)


def _log_moment_shape(p, q, m):
    # log[ q Gamma(q/p) / (p Gamma((q+1)/2)) * E|Z|^q ]
    return (math.log(q) + math.lgamma(q / p) - math.log(p) - math.lgamma(0.5 * (q + 1.0))
            + log_gauss_abs_moment(m, q))


def log_vq_bound_first(profile: ConcentrationProfile, m, q):
    p = profile.p
    return ((-q / p + q / 2.0) * math.log(2.0) + LOG_SQRT_PI + _log_median_shift_prefactor(profile)
            - (q / p) * math.log(profile.c_X) + _log_moment_shape(p, q, m))


def log_vq_bound_second(profile: ConcentrationProfile, m, q):
    p = profile.p
    return (LOG_SQRT_PI + (q / 2.0 + 1.0) * math.log(2.0) + math.log(profile.C_X)
            - (q / p) * math.log(profile.c_X) + _log_moment_shape(p, q, m))


def vq_bound_first(profile: ConcentrationProfile, m, q):
    """Upper bound on V_q(f)^q via the median-shifted tail bound."""
    if q < 1:
        raise ValueError("moment order q must be >= 1")
    return _exp_or_inf(log_vq_bound_first(profile, m, q))


def vq_bound_second(profile: ConcentrationProfile, m, q):
    """Upper bound on V_q(f)^q via the two-point moment V~_q."""
    if q < 1:
        raise ValueError("moment order q must be >= 1")
    return _exp_or_inf(log_vq_bound_second(profile, m, q))


def two_point_tail_bound(alpha: Callable[[float], float], r):
    """2 alpha(r/2), clamped to [0, 1]."""
    return min(1.0, max(0.0, 2.0 * alpha(0.5 * r)))


# ---------------------------------------------------------------------------
# The four constant families

@dataclass(frozen=True)
class Constants:
    """log A, log A~, log B, log B~ together with their values (B may be huge)."""
    log_A: float
    log_A_tilde: float
    log_B: float
    log_B_tilde: float

    @property
    def A(self):
        return _exp_or_inf(self.log_A)

    @property
    def A_tilde(self):
        return _exp_or_inf(self.log_A_tilde)

    @property
    def B(self):
        return _exp_or_inf(self.log_B)

    @property
    def B_tilde(self):
        return _exp_or_inf(self.log_B_tilde)

    def as_dict(self):
        return {"A": self.A, "A_tilde": self.A_tilde, "B": self.B, "B_tilde": self.B_tilde,
                "log_A": self.log_A, "log_A_tilde": self.log_A_tilde,
                "log_B": self.log_B, "log_B_tilde": self.log_B_tilde}


def _check_dim(m):
    if int(m) != m or m < 1:
        raise ValueError("target dimension m must be a positive integer")


def _e1(m):
    return (m + 1.0) / (4.0 * m - 2.0)


def _log_two_plus(m):
    return math.log(2.0 + math.exp(1.0 / (4.0 * m - 2.0)))


def constants(m, profile: ConcentrationProfile | float, variant="displayed") -> Constants:
    """A_{m,X}, A~_{m,X}, B_{m,X}, B~_{m,X} for a profile (or a bare C_X).

    ``variant='proof-derived'`` replaces the exponent (pi C_X)^2 in B_{m,X}
    by pi C_X^2, which is what the median-shift prefactor gives for p = 2.
    """
    _check_dim(m)
    C = profile.C_X if isinstance(profile, ConcentrationProfile) else float(profile)
    if not C > 0:
        raise ValueError("C_X must be positive")
    e1 = _e1(m)
    log_A = _log1p_exp(LOG_SQRT_PI - math.log(4.0) + math.log(max(1.0, 2.0 * C)) + 2.0 * C + e1 + _log_two_plus(m))
    log_At = _log1p_exp(LOG_SQRT_PI + math.log(C) - math.log(2.0) + e1 + _log_two_plus(m))
    if variant == "displayed":
        g = (math.pi * C) ** 2
    elif variant == "proof-derived":
        g = math.pi * C * C
    else:
        raise ValueError(f"unknown variant {variant!r}")
    log_B = _log1p_exp(LOG_SQRT_PI - math.log(2.0) + e1 + max(0.5 * g, math.log(2.0 * C) + g))
    log_Bt = _log1p_exp(LOG_SQRT_PI + math.log(C) + e1)
    return Constants(log_A, log_At, log_B, log_Bt)


def manifold_constants(m) -> Constants:
    """A_m, A~_m, B_m, B~_m as displayed for closed manifolds (C_X = 1)."""
    _check_dim(m)
    e1 = _e1(m)
    log_A = _log1p_exp(LOG_SQRT_PI - math.log(2.0) + (9.0 * m - 3.0) / (4.0 * m - 2.0) + _log_two_plus(m))
    log_At = _log1p_exp(LOG_SQRT_PI - math.log(2.0) + e1 + _log_two_plus(m))
    log_B = _log1p_exp(LOG_SQRT_PI + math.pi ** 2 + e1)
    log_Bt = _log1p_exp(LOG_SQRT_PI + e1)
    return Constants(log_A, log_At, log_B, log_Bt)


# ---------------------------------------------------------------------------
# Main tail bounds

def _log_thm_main(profile: ConcentrationProfile, m, r, variant="displayed"):
    if profile.p not in (1, 2):
        raise UnsupportedExponentError(f"the closed-form tail bound is proven only for p in {{1, 2}} (got p={profile.p})")
    k = constants(m, profile, variant)
    c = profile.c_X
    if profile.p == 1:
        s = math.sqrt(2.0 * m)
        return min(k.log_A - (c / s) * r, k.log_A_tilde - (c / (2.0 * s)) * r)
    return min(k.log_B - (c / (8.0 * m)) * r * r, k.log_B_tilde - (c / (16.0 * m)) * r * r)


def thm_main_tail(profile: ConcentrationProfile, m, r, variant="displayed") -> BoundValue:
    """Bound on mu{d_N(f(x), E f) >= r} for 1-Lipschitz f into an m-dim Hadamard manifold."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return BoundValue(_log_thm_main(profile, m, r, variant))


def cor_manifold_tail(kind, parameter, m, r) -> BoundValue:
    """Closed-manifold specialization: kind 'spectral' takes lambda_1, 'ricci' takes kappa."""
    if not parameter > 0:
        raise ValueError("spectral gap / Ricci bound must be positive")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    k = manifold_constants(m)
    if kind == "spectral":
        a = math.sqrt(parameter / (2.0 * m))
        return BoundValue(min(k.log_A - a * r / 3.0, k.log_A_tilde - a * r / 6.0))
    if kind == "ricci":
        return BoundValue(min(k.log_B - parameter * r * r / (16.0 * m),
                              k.log_B_tilde - parameter * r * r / (32.0 * m)))
    raise ValueError(f"kind must be 'spectral' or 'ricci' (got {kind!r})")


def gromov_bound(lambda1, m, r) -> BoundValue:
    """m / (lambda_1 r^2), clamped."""
    if not (lambda1 > 0 and r > 0):
        raise ValueError("need lambda_1 > 0 and r > 0")
    return BoundValue(math.log(m) - math.log(lambda1) - 2.0 * math.log(r))


def log_gaussian_tail_exact(m, r):
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return log_gammaincc(0.5 * m, 0.5 * r * r)


def gaussian_tail_exact(m, r):
    """gamma_m{|x| >= r} = Q(m/2, r^2/2), the chi-distribution survival function."""
    return math.exp(log_gaussian_tail_exact(m, r))


def ledoux_oleszkiewicz_form(profile: ConcentrationProfile, m, r, C) -> BoundValue:
    """C C_X gamma_m{|x| >= C sqrt(c_X) r}; the universal constant C has no default."""
    if profile.p != 2:
        raise UnsupportedExponentError("this comparator is stated for Gaussian concentration (p = 2)")
    if not C > 0:
        raise ValueError("universal constant C must be positive")
    return BoundValue(math.log(C * profile.C_X) + log_gaussian_tail_exact(m, C * math.sqrt(profile.c_X) * r))


def gaussian_tail_bound(m, r) -> BoundValue:
    """min{B_m exp(-r^2/(16m)), B~_m exp(-r^2/(32m))}, the bound on gamma_m{|x| >= r}."""
    return cor_manifold_tail("ricci", 1.0, m, r)


def crossover_radius(profile: ConcentrationProfile, lambda1, m, variant="displayed"):
    """Smallest r* such that the (unclamped) main bound is below Gromov's for every r > r*.

    log(main) - log(gromov) is concave in r (a minimum of concave functions),
    so it has at most two roots and r* is the larger one; 0.0 if the main
    bound is smaller everywhere.
    """
    def gap(r):
        return _log_thm_main(profile, m, r, variant) - (math.log(m) - math.log(lambda1) - 2.0 * math.log(r))

    hi = 1.0
    while gap(hi) >= 0 or gap(2 * hi) >= gap(hi):
        hi *= 2.0
        if hi > 1e12:
            raise ArithmeticError("no crossover found")
    peak = minimize_scalar(lambda r: -gap(r), bounds=(1e-12, hi), method="bounded",
                           options={"xatol": 1e-12 * hi})
    r_peak = float(peak.x)
    if gap(r_peak) < 0:
        # concavity: check the peak really is the maximum on the whole half line
        return 0.0
    return float(brentq(gap, r_peak, hi, xtol=1e-14, rtol=1e-15))


def bounds_table(profile: ConcentrationProfile, m, r_grid, lambda1=None, kappa=None, lo_constant=None):
    """Rows of every bound that the inputs allow, one dict per radius."""
    rows = []
    for r in np.asarray(r_grid, dtype=float):
        row = {"r": float(r)}
        if profile.p in (1, 2):
            row["thm_main"] = thm_main_tail(profile, m, r).value
        row["lemma23"] = lemma23_bound(profile, r).value
        if lambda1 is not None:
            row["gromov"] = gromov_bound(lambda1, m, r).value if r > 0 else 1.0
            row["cor12_spectral"] = cor_manifold_tail("spectral", lambda1, m, r).value
        if kappa is not None:
            row["cor12_ricci"] = cor_manifold_tail("ricci", kappa, m, r).value
        if lo_constant is not None and profile.p == 2:
            row["ledoux_oleszkiewicz"] = ledoux_oleszkiewicz_form(profile, m, r, lo_constant).value
        rows.append(row)
    return rows
