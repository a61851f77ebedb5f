"""Scalar special functions: Gamma, Pochhammer, Laguerre polynomials and
the Bessel family J, I, K.

Every function accepts a scalar or an array for its continuous argument
and returns a float for scalar input. Gamma arithmetic is done in the log
domain throughout; Bessel functions switch between a power series and a
Hankel-type asymptotic expansion at a fixed argument.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from ._validation import DomainError, check_int, check_real

__all__ = [
    "Accuracy",
    "ln_gamma",
    "gamma_ratio",
    "pochhammer",
    "laguerre_poly",
    "bessel_j",
    "bessel_j_normalized",
    "bessel_i",
    "bessel_i_log",
    "macdonald_k",
    "macdonald_k_log",
]

J_SERIES_SWITCH = 12.0
I_SERIES_SWITCH = 30.0


@dataclass(frozen=True)
class Accuracy:
    """Stopping rule for the series expansions."""

    rel_tol: float = 1e-12
    max_terms: int = 400

    def __post_init__(self):
        check_real("rel_tol", self.rel_tol, 0.0, 1e-6, low_open=True)
        check_int("max_terms", self.max_terms, low=16)


DEFAULT_ACCURACY = Accuracy()


def _asarray(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(values, scalar):
    if scalar:
        return float(np.asarray(values).reshape(()))
    return values


def ln_gamma(x):
    """Natural log of the Gamma function for ``x > 0``."""
    arr, scalar = _asarray(x)
    if np.any(~(arr > 0)):
        raise DomainError("ln_gamma requires x > 0")
    return _ret(gammaln(arr), scalar)


def gamma_ratio(p, q):
    """Gamma(p) / Gamma(q), assembled as exp of a log difference."""
    p_arr, p_scalar = _asarray(p)
    q_arr, q_scalar = _asarray(q)
    if np.any(~(p_arr > 0)) or np.any(~(q_arr > 0)):
        raise DomainError("gamma_ratio requires p > 0 and q > 0")
    out = np.exp(gammaln(p_arr) - gammaln(q_arr))
    return _ret(out, p_scalar and q_scalar)


def pochhammer(alpha, n):
    """Rising factorial (alpha)_n = alpha (alpha+1) ... (alpha+n-1)."""
    alpha = check_real("alpha", alpha)
    n = check_int("n", n)
    if n > 0 and alpha <= 0 and alpha == math.floor(alpha):
        raise DomainError(f"pochhammer pole: alpha={alpha} is a nonpositive integer")
    if alpha > 0 and n > 150:
        return math.exp(gammaln(alpha + n) - gammaln(alpha))
    out = 1.0
    for j in range(n):
        out *= alpha + j
    return out


def laguerre_poly(l, mu, t):
    """Generalized Laguerre polynomial L_l^mu(t) by upward recurrence in l."""
    l = check_int("l", l)
    mu = check_real("mu", mu, -1.0, low_open=True)
    t_arr, scalar = _asarray(t)
    prev = np.ones_like(t_arr)
    if l == 0:
        return _ret(prev, scalar)
    cur = 1.0 + mu - t_arr
    for k in range(1, l):
        prev, cur = cur, ((2 * k + 1 + mu - t_arr) * cur - (k + mu) * prev) / (k + 1)
    return _ret(cur, scalar)


def _hankel_terms(nu, x, max_terms):
    """Terms b_k = a_k(nu) / x^k of the large-argument Bessel expansions.

    Returns the alternating sums (P, Q, S) where P, Q drive J and
    S = sum (-1)^k b_k drives I. Summation stops per point once the terms
    stop decreasing or drop below double precision.
    """
    mu = 4.0 * nu * nu
    b = np.ones_like(x)
    p_sum = np.ones_like(x)
    q_sum = np.zeros_like(x)
    s_sum = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, max_terms):
        nb = b * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        if (2 * k - 1) ** 2 > mu:
            # past the order the terms shrink until the expansion turns divergent
            active &= np.abs(nb) <= np.abs(b)
        if not active.any():
            break
        nb = np.where(active, nb, 0.0)
        if k % 2 == 0:
            p_sum += (-1) ** (k // 2) * nb
        else:
            q_sum += (-1) ** (k // 2) * nb
        s_sum += (-1) ** k * nb
        b = nb
        active &= np.abs(b) > 1e-17
        if not active.any():
            break
    return p_sum, q_sum, s_sum


def _j_asymptotic(nu, x, max_terms):
    p_sum, q_sum, _ = _hankel_terms(nu, x, max_terms)
    chi = x - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p_sum * np.cos(chi) - q_sum * np.sin(chi))


def _j_normalized_series(alpha, t, accuracy):
    w = -0.25 * t * t
    term = np.ones_like(t)
    total = np.ones_like(t)
    for k in range(1, accuracy.max_terms):
        term = term * w / (k * (k + alpha))
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.maximum(1.0, np.abs(total))):
            break
    return total


def _j_large(alpha, x, accuracy):
    """J_alpha(x) for x above the series switch.

    Hankel expansions at the two lowest orders congruent to alpha, then
    forward recurrence, which is stable while the order stays below x.
    """
    steps = max(0, math.ceil(alpha - 0.5))
    base = alpha - steps
    j_lo = _j_asymptotic(base, x, accuracy.max_terms)
    if steps == 0:
        return j_lo
    j_hi = _j_asymptotic(base + 1.0, x, accuracy.max_terms)
    nu = base + 1.0
    for _ in range(steps - 1):
        j_lo, j_hi = j_hi, (2.0 * nu / x) * j_hi - j_lo
        nu += 1.0
    return j_hi


def bessel_j_normalized(alpha, t, accuracy=None):
    """Normalized Bessel function j_alpha(t) = 2^a Gamma(a+1) t^-a J_a(t).

    Even and entire in t with j_alpha(0) = 1. Orders in (-1, -1/2) are
    accepted as well; the translation integral needs j_{alpha - 1/2}.
    """
    accuracy = accuracy or DEFAULT_ACCURACY
    alpha = check_real("alpha", alpha, -1.0, low_open=True)
    t_arr, scalar = _asarray(t)
    t_arr = np.abs(t_arr)
    out = np.empty_like(t_arr)
    # past the order the recurrence is stable; below it the series has little cancellation
    small = (t_arr <= J_SERIES_SWITCH) | (t_arr <= alpha + 1.0)
    if small.any():
        out[small] = _j_normalized_series(alpha, t_arr[small], accuracy)
    big = ~small
    if big.any():
        x = t_arr[big]
        scale = np.exp(alpha * math.log(2.0) + gammaln(alpha + 1.0) - alpha * np.log(x))
        out[big] = scale * _j_large(alpha, x, accuracy)
    return _ret(out, scalar)


def bessel_j(nu, x, accuracy=None):
    """Bessel function of the first kind J_nu(x), nu >= -1/2, x >= 0."""
    nu = check_real("nu", nu, -0.5)
    x_arr, scalar = _asarray(x)
    if np.any(x_arr < 0):
        raise DomainError("bessel_j requires x >= 0")
    jn = np.asarray(bessel_j_normalized(nu, x_arr, accuracy))
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.exp(nu * np.log(x_arr / 2.0) - gammaln(nu + 1.0))
    out = scale * jn
    if nu == 0:
        out = np.where(x_arr == 0, 1.0, out)
    return _ret(out, scalar)


def bessel_i_log(alpha, x, accuracy=None):
    """Return (ln |I_alpha(x)|, sign I_alpha(x)) without overflow."""
    accuracy = accuracy or DEFAULT_ACCURACY
    alpha = check_real("alpha", alpha, -0.5)
    x_arr, scalar = _asarray(x)
    if np.any(x_arr < 0):
        raise DomainError("bessel_i requires x >= 0")
    log_mag = np.empty_like(x_arr)
    sign = np.ones_like(x_arr)

    zero = x_arr == 0
    if zero.any():
        log_mag[zero] = 0.0 if alpha == 0 else (-np.inf if alpha > 0 else np.inf)

    switch = max(I_SERIES_SWITCH, alpha * alpha)
    small = (~zero) & (x_arr <= switch)
    if small.any():
        xs = x_arr[small]
        w = 0.25 * xs * xs
        term = np.ones_like(xs)
        total = np.ones_like(xs)
        for k in range(1, accuracy.max_terms):
            term = term * w / (k * (k + alpha))
            total += term
            if np.all(term <= 1e-17 * total):
                break
        log_mag[small] = alpha * np.log(0.5 * xs) - gammaln(alpha + 1.0) + np.log(total)

    big = x_arr > switch
    if big.any():
        xb = x_arr[big]
        _, _, s_sum = _hankel_terms(alpha, xb, accuracy.max_terms)
        log_mag[big] = xb - 0.5 * np.log(2.0 * math.pi * xb) + np.log(s_sum)
    if scalar:
        return float(log_mag.reshape(())), float(sign.reshape(()))
    return log_mag, sign


def bessel_i(alpha, x, accuracy=None):
    """Modified Bessel function of the first kind I_alpha(x)."""
    log_mag, sign = bessel_i_log(alpha, x, accuracy)
    return sign * np.exp(log_mag) if np.ndim(log_mag) else sign * math.exp(log_mag)


def _log_cosh(y):
    y = np.abs(y)
    return y + np.log1p(np.exp(-2.0 * y)) - math.log(2.0)


def _k_log_integrand(nu, x, t):
    return -2.0 * x * np.sinh(0.5 * t) ** 2 + _log_cosh(nu * t)


def macdonald_k_log(nu, x):
    """ln K_nu(x) from the integral of exp(-x cosh t) cosh(nu t) over t > 0.

    The integrand is even and analytic in t, so the trapezoidal rule
    converges geometrically; the range is cut where the integrand falls
    below 1e-18 of its peak and the step is halved until stable.
    """
    nu = abs(check_real("nu", nu))
    x_arr, scalar = _asarray(x)
    if np.any(~(x_arr > 0)):
        raise DomainError("macdonald_k requires x > 0")
    xs = x_arr.ravel()[:, None]

    t_peak = np.arcsinh(nu / xs)
    g_peak = np.maximum(_k_log_integrand(nu, xs, t_peak), 0.0)
    cut = g_peak - math.log(1e18)
    lo = t_peak.copy()
    hi = t_peak + 1.0
    while True:
        need = _k_log_integrand(nu, xs, hi) > cut
        if not need.any():
            break
        hi = np.where(need, 2.0 * hi, hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        above = _k_log_integrand(nu, xs, mid) > cut
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    upper = hi

    def trapezoid(m):
        grid = np.linspace(0.0, 1.0, m + 1)[None, :] * upper
        vals = np.exp(_k_log_integrand(nu, xs, grid) - g_peak)
        vals[:, 0] *= 0.5
        vals[:, -1] *= 0.5
        return vals.sum(axis=1) * (upper[:, 0] / m)

    m = 128
    prev = trapezoid(m)
    for _ in range(8):
        m *= 2
        cur = trapezoid(m)
        done = np.abs(cur - prev) <= 1e-15 * np.abs(cur)
        prev = cur
        if done.all():
            break
    out = (np.log(prev) + g_peak[:, 0] - xs[:, 0]).reshape(x_arr.shape)
    return _ret(out, scalar)


def macdonald_k(nu, x):
    """Macdonald function K_nu(x), x > 0."""
    out = np.exp(macdonald_k_log(nu, x))
    return float(out) if np.ndim(out) == 0 else out
