"""Regularized incomplete beta and gamma functions.

Both use the classical series / continued-fraction split (modified Lentz).
Log-domain variants are provided so that deep tails do not underflow.
"""
import math

import numpy as np

_EPS = 1e-16
_TINY = 1e-300
_MAXIT = 20000


def _lentz_guard(v):
    return _TINY if abs(v) < _TINY else v


def _betacf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 / _lentz_guard(1.0 - qab * x / qap)
    h = d
    for k in range(1, _MAXIT + 1):
        k2 = 2 * k
        aa = k * (b - k) * x / ((qam + k2) * (a + k2))
        d = 1.0 / _lentz_guard(1.0 + aa * d)
        c = _lentz_guard(1.0 + aa / c)
        h *= d * c
        aa = -(a + k) * (qab + k) * x / ((a + k2) * (qap + k2))
        d = 1.0 / _lentz_guard(1.0 + aa * d)
        c = _lentz_guard(1.0 + aa / c)
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _log_betainc_cf(a, b, x, one_minus_x):
    # valid (fast convergence) for x < (a + 1) / (a + b + 2)
    log_front = a * math.log(x) + b * math.log(one_minus_x) - log_beta(a, b) - math.log(a)
    return log_front + math.log(_betacf(a, b, x))


def _check_beta_args(a, b, x):
    if not (a > 0 and b > 0):
        raise ValueError(f"incomplete beta requires a, b > 0 (got a={a}, b={b})")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"incomplete beta requires 0 <= x <= 1 (got x={x})")


def betainc(a, b, x, one_minus_x=None):
    """Regularized incomplete beta I_x(a, b).

    ``one_minus_x`` may be supplied when 1 - x is known more accurately than
    the subtraction (e.g. cos^2 r for x = sin^2 r).
    """
    a, b, x = float(a), float(b), float(x)
    _check_beta_args(a, b, x)
    y = 1.0 - x if one_minus_x is None else float(one_minus_x)
    if x == 0.0:
        return 0.0
    if y == 0.0:
        return 1.0
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(_log_betainc_cf(a, b, x, y))
    return -math.expm1(_log_betainc_cf(b, a, y, x))


def log_betainc(a, b, x, one_minus_x=None):
    a, b, x = float(a), float(b), float(x)
    _check_beta_args(a, b, x)
    y = 1.0 - x if one_minus_x is None else float(one_minus_x)
    if x == 0.0:
        return -math.inf
    if y == 0.0:
        return 0.0
    if x < (a + 1.0) / (a + b + 2.0):
        return _log_betainc_cf(a, b, x, y)
    return math.log1p(-math.exp(_log_betainc_cf(b, a, y, x)))


def _gamma_series(a, x):
    # sum_{k>=0} x^k / (a (a+1) ... (a+k)), returned in log form with the prefactor
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAXIT):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return -x + a * math.log(x) - math.lgamma(a) + math.log(total)
    raise ArithmeticError(f"incomplete gamma series did not converge (a={a}, x={x})")


def _gamma_cf(a, x):
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / _lentz_guard(b)
    h = d
    for i in range(1, _MAXIT + 1):
        an = -i * (i - a)
        b += 2.0
        d = 1.0 / _lentz_guard(an * d + b)
        c = _lentz_guard(b + an / c)
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return -x + a * math.log(x) - math.lgamma(a) + math.log(h)
    raise ArithmeticError(f"incomplete gamma continued fraction did not converge (a={a}, x={x})")


def _check_gamma_args(a, x):
    if not a > 0:
        raise ValueError(f"incomplete gamma requires a > 0 (got a={a})")
    if not x >= 0:
        raise ValueError(f"incomplete gamma requires x >= 0 (got x={x})")


def gammainc(a, x):
    """Regularized lower incomplete gamma P(a, x)."""
    a, x = float(a), float(x)
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return math.exp(_gamma_series(a, x))
    return -math.expm1(_gamma_cf(a, x))


def log_gammaincc(a, x):
    """log Q(a, x), finite far beyond the underflow point of Q itself."""
    a, x = float(a), float(x)
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return -math.inf
    if x < a + 1.0:
        return math.log1p(-math.exp(_gamma_series(a, x)))
    return _gamma_cf(a, x)


def gammaincc(a, x):
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    return math.exp(log_gammaincc(a, x))


def vectorize(func):
    """Broadcast a scalar special function over array arguments.

    Scalars in give a Python float back.
    """
    vec = np.vectorize(func, otypes=[float])

    def wrapper(*args):
        out = vec(*args)
        return float(out) if out.ndim == 0 else out

    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper
