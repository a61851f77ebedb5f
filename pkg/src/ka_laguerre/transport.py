"""Generalized translation, convolution and the semigroup kernels.

The translation of f by r evaluated at s is the angle integral

    T_r f(s) = Gamma(alpha+1) / (sqrt(pi) Gamma(alpha+1/2))
               * int_0^pi f(A(theta)) j_{alpha-1/2}(c sin theta) (sin theta)^(2 alpha) dtheta,

with A(theta) = (r^a + s^a + 2 (rs)^(a/2) cos theta)^(1/a) and
c = (2/a)(rs)^(a/2), i.e. the Bessel factor of the defining formula
rewritten through the normalized j so the integrand is regular at the
endpoints. At alpha = -1/2 the angular measure degenerates and the
translation is its limit: the average of f over the two endpoints minus
(c/2) int f(A) J_1(c sin theta) dtheta.
"""

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from . import specfun
from ._validation import DomainError, EvaluationError, check_int, check_real
from .laguerre import HolomorphicTime, Params, as_time
from .quadrature import ThetaRule, make_radial_rule, make_sine_power_rule, make_theta_rule

__all__ = [
    "KernelEval",
    "SeriesValue",
    "translate",
    "convolve",
    "kernel_q",
    "translated_kernel_closed",
    "log_translated_kernel",
    "DEFAULT_SINE_NODES",
]

DEFAULT_SINE_NODES = 64
LOG_SCALE_THRESHOLD = 700.0


@dataclass(frozen=True)
class KernelEval:
    """A kernel value, stored as ln(value) when ``log_scaled`` is set."""

    value: complex
    log_scaled: bool = False

    def to_complex(self):
        return cmath.exp(self.value) if self.log_scaled else complex(self.value)

    def log(self):
        return complex(self.value) if self.log_scaled else cmath.log(self.value)


class SeriesValue(NamedTuple):
    value: complex
    tail_bound: float


def _arc_argument(params, r, s, theta):
    """A(theta), via (r^{a/2} - s^{a/2})^2 + 4 (rs)^{a/2} cos^2(theta/2) >= 0."""
    a = params.a
    rh = np.power(r, 0.5 * a)
    sh = np.power(s, 0.5 * a)
    inside = (rh - sh) ** 2 + 4.0 * rh * sh * np.cos(0.5 * theta) ** 2
    return np.power(np.maximum(inside, 0.0), 1.0 / a)


def translate(f, params, r, s, theta_rule=None):
    """T_r^{a,alpha} f(s) for scalar r > 0 and scalar or array s > 0.

    By default the angle integral uses a Gauss-Jacobi rule that absorbs
    (sin theta)^(2 alpha); passing a plain ``ThetaRule`` integrates the
    weight explicitly instead.
    """
    r = check_real("r", r, 0.0, low_open=True)
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0):
        raise DomainError("translate requires s > 0")
    scalar = s_arr.ndim == 0
    s_col = s_arr.reshape(-1, 1)
    a, alpha = params.a, params.alpha
    c = (2.0 / a) * np.power(r * s_col, 0.5 * a)

    if alpha == -0.5:
        rule = theta_rule or make_theta_rule()
        theta = rule.nodes[None, :]
        vals = np.asarray(f(_arc_argument(params, r, s_col, theta)))
        ends = np.asarray(f(_arc_argument(params, r, s_col, np.array([[0.0, math.pi]]))))
        j1 = specfun.bessel_j(1.0, (c * np.sin(theta)).ravel()).reshape(vals.shape)
        out = 0.5 * ends.sum(axis=1) - 0.5 * c[:, 0] * ((vals * j1) @ rule.weights)
    else:
        const = math.exp(gammaln(alpha + 1.0) - gammaln(alpha + 0.5)) / math.sqrt(math.pi)
        if theta_rule is None:
            rule = make_sine_power_rule(alpha, DEFAULT_SINE_NODES)
            weights = rule.weights[None, :]
        else:
            rule = theta_rule
            weights = rule.weights[None, :] * np.sin(rule.nodes[None, :]) ** (2.0 * alpha)
        theta = rule.nodes[None, :]
        vals = np.asarray(f(_arc_argument(params, r, s_col, theta)))
        jn = specfun.bessel_j_normalized(alpha - 0.5, (c * np.sin(theta)).ravel())
        out = const * np.sum(vals * np.reshape(jn, vals.shape) * weights, axis=1)

    if not np.all(np.isfinite(out)):
        idx = int(np.flatnonzero(~np.isfinite(out))[0])
        raise EvaluationError(f"translation not finite at s index {idx}", index=idx)
    if scalar:
        out = out[0]
        return complex(out) if np.iscomplexobj(out) else float(out)
    return out.reshape(s_arr.shape)


def convolve(f, g, params, r, rule=None, theta_rule=None):
    """(f * g)(r) = int T_r f(s) g(s) d mu(s) on the radial rule nodes."""
    rule = rule or make_radial_rule(params)
    s = rule.nodes
    tf = translate(f, params, r, s, theta_rule)
    return (tf * np.asarray(g(s))) @ rule.weights


def kernel_q(params, z, r, L=200):
    """Truncated series of the semigroup kernel q_{a,alpha;z}(r).

    q = 2^{alpha+1} / (a^alpha Gamma(alpha+1)) sum_l e^{-z(2l+alpha+1)} phi_l(r).
    Returns the value with the tail bound e^{-2(L+1)Re z} / (1 - e^{-2 Re z}).
    At Re z = 0 only the finite sum is available and ``L`` must be given
    explicitly (pass ``L=None`` to request the untruncated kernel, which
    is rejected there).
    """
    z = as_time(z)
    if L is None:
        if z.boundary:
            raise DomainError("the kernel series does not converge at Re z = 0")
        L = 200
    L = check_int("L", L)
    a, alpha = params.a, params.alpha
    r_arr = np.asarray(r, dtype=float)
    u = params.to_u(r_arr)
    weight = cmath.exp(-z.z * (alpha + 1.0))
    step = cmath.exp(-2.0 * z.z)
    prev = np.zeros_like(u)
    cur = np.ones_like(u)
    total = weight * cur
    for l in range(L):
        prev, cur = cur, ((2 * l + alpha + 1.0 - u) * cur - (l + alpha) * prev) / (l + 1)
        weight *= step
        total = total + weight * cur
    const = math.exp((alpha + 1.0) * math.log(2.0) - alpha * math.log(a) - gammaln(alpha + 1.0))
    value = const * total * np.exp(-0.5 * u)
    x = 2.0 * z.z.real
    tail = math.inf if x == 0 else math.exp(-(L + 1) * x) / -math.expm1(-x)
    if np.ndim(value) == 0:
        value = complex(value)
    return SeriesValue(value, tail)


def log_translated_kernel(params, r, s, t):
    """ln T_r q_{a,alpha;t}(s) for real t > 0, broadcasting over r and s."""
    t = check_real("t", t, 0.0, low_open=True)
    a, alpha = params.a, params.alpha
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    rh = np.power(r, 0.5 * a)
    sh = np.power(s, 0.5 * a)
    sinh_t = math.sinh(t)
    coth_t = 1.0 / math.tanh(t)
    arg = (2.0 / a) * rh * sh / sinh_t
    log_i, _ = specfun.bessel_i_log(alpha, np.ravel(np.broadcast_to(arg, np.broadcast(r, s).shape)))
    log_i = np.reshape(log_i, np.broadcast(r, s).shape)
    return (-(coth_t / a) * (rh * rh + sh * sh) - alpha * np.log(rh * sh)
            - math.log(sinh_t) + log_i)


def translated_kernel_closed(params, r, s, z):
    """Closed form of T_r q_{a,alpha;z}(s).

    Supported for real z > 0, where it is

        exp(-(coth z / a)(r^a + s^a)) / ((rs)^{a alpha/2} sinh z) * I_alpha((2/a)(rs)^{a/2} / sinh z),

    and for the boundary point z = i pi/2, where I_alpha at an imaginary
    argument turns into J_alpha and the kernel reduces to
    e^{-(alpha+1) pi i/2} j_alpha((2/a)(rs)^{a/2}) / (a^alpha Gamma(alpha+1)).
    """
    r = check_real("r", r, 0.0, low_open=True)
    s = check_real("s", s, 0.0, low_open=True)
    zt = as_time(z)
    zc = zt.z
    a, alpha = params.a, params.alpha
    if zc.imag == 0 and zc.real > 0:
        arg = (2.0 / a) * (r * s) ** (0.5 * a) / math.sinh(zc.real)
        log_val = float(log_translated_kernel(params, r, s, zc.real))
        if arg > LOG_SCALE_THRESHOLD:
            return KernelEval(complex(log_val), log_scaled=True)
        return KernelEval(complex(math.exp(log_val)))
    if zc.real == 0 and zc.imag == 0.5 * math.pi:
        c = (2.0 / a) * (r * s) ** (0.5 * a)
        phase = cmath.exp(-0.5j * math.pi * (alpha + 1.0))
        mag = specfun.bessel_j_normalized(alpha, c) * math.exp(-alpha * math.log(a) - gammaln(alpha + 1.0))
        return KernelEval(phase * mag)
    raise DomainError("closed kernel supports real z > 0 and z = i pi/2 only")


def q_closed(params, t, s):
    """q_{a,alpha;t}(s) for real t > 0 from the r -> 0 limit of the closed kernel.

    q_t(s) = exp(-(coth t / a) s^a) / (a^alpha Gamma(alpha+1) sinh^{alpha+1} t).
    """
    t = check_real("t", t, 0.0, low_open=True)
    a, alpha = params.a, params.alpha
    s = np.asarray(s, dtype=float)
    log_val = (-(1.0 / math.tanh(t)) / a * np.power(s, a) - alpha * math.log(a)
               - gammaln(alpha + 1.0) - (alpha + 1.0) * math.log(math.sinh(t)))
    return np.exp(log_val)


def bilinear_kernel_series(params, r, s, t, L=400):
    """Hille-Hardy bilinear series for T_r q_t(s), summed term by term.

    sum_n 2^{alpha+1}/(a^alpha Gamma(alpha+1)) e^{-t(2n+alpha+1)} n!/(alpha+1)_n phi_n(r) phi_n(s),
    written with orthonormal Laguerre polynomials to stay finite.
    """
    a, alpha = params.a, params.alpha
    ur, us = params.to_u(r), params.to_u(s)

    def orthonormal(u):
        out = np.empty(L + 1)
        p_prev, p = 0.0, math.exp(-0.5 * gammaln(alpha + 1.0))
        out[0] = p
        for j in range(L):
            p_prev, p = p, ((2 * j + alpha + 1.0 - u) * p
                            - math.sqrt(j * (j + alpha)) * p_prev) / math.sqrt((j + 1) * (j + 1 + alpha))
            out[j + 1] = p
        return out

    n = np.arange(L + 1)
    terms = np.exp(-t * (2 * n + alpha + 1.0)) * orthonormal(ur) * orthonormal(us)
    const = (alpha + 1.0) * math.log(2.0) - alpha * math.log(a)
    return math.exp(const - 0.5 * (ur + us)) * terms.sum()
