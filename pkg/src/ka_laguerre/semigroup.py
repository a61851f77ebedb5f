"""The holomorphic semigroup exp(-(z/a) L_{a,alpha}), the a-deformed Hankel
transform and the radial parts of the semigroup on spherical components.

The semigroup acts on the normalized basis by the multiplier
e^{-z(2l+alpha+1)}; for real t > 0 it is also a convolution with the
closed-form translated kernel. The Hankel transform is its boundary value
at z = i pi/2 up to the phase e^{(alpha+1) pi i/2}.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import specfun
from ._validation import DomainError, check_int, check_real
from .laguerre import (
    DEFAULT_DEGREE,
    SpectralCoeffs,
    analyze,
    as_time,
    apply_operator_pointwise,
    phi_tilde_matrix,
    synthesize,
)
from .quadrature import Params, integrate_adaptive, make_radial_rule
from .transport import log_translated_kernel

__all__ = [
    "ComponentIndex",
    "apply_spectral",
    "apply_kernel",
    "hankel",
    "hankel_spectral",
    "boundary_identity_residual",
    "lambda_kernel",
    "psi",
    "omega_radial",
    "omega_radial_coeffs",
    "infinitesimal_generator_residual",
]

HANKEL_DECAY = 0.5
HANKEL_NODES = 128
HANKEL_MAX_NODES = 1024


@dataclass(frozen=True)
class ComponentIndex:
    """Spherical component (N, <k>, a, m) of the N-dimensional system.

    The attached one-dimensional type is lambda = (2m + 2<k> + N - 2) / a;
    components with lambda < -1/2 are rejected.
    """

    N: int
    k_sum: float
    a: float
    m: int

    def __post_init__(self):
        object.__setattr__(self, "N", check_int("N", self.N, low=1))
        object.__setattr__(self, "k_sum", check_real("k_sum", self.k_sum, 0.0))
        object.__setattr__(self, "a", check_real("a", self.a, 0.0, low_open=True))
        object.__setattr__(self, "m", check_int("m", self.m))
        if self.lam < -0.5:
            raise DomainError(
                f"lambda_(k,a,m) = {self.lam} < -1/2 for N={self.N}, <k>={self.k_sum}, a={self.a}, m={self.m}")

    @staticmethod
    def type_of(N, k_sum, a, m):
        return (2.0 * m + 2.0 * k_sum + N - 2.0) / a

    @property
    def lam(self):
        return self.type_of(self.N, self.k_sum, self.a, self.m)

    @property
    def lam_a(self):
        """lambda at m = 0."""
        return self.type_of(self.N, self.k_sum, self.a, 0)

    @property
    def params(self):
        return Params(self.a, self.lam)

    def weight_exponent(self):
        """Exponent of the radial measure r^(2<k>+N+a-3) dr."""
        return 2.0 * self.k_sum + self.N + self.a - 3.0


def apply_spectral(c, z):
    """Multiply c_l by e^{-z(2l+alpha+1)}; any Re z >= 0 is allowed."""
    z = as_time(z).z
    l = np.arange(c.L + 1)
    mult = np.exp(-z * (2.0 * l + c.params.alpha + 1.0))
    if z.imag == 0:
        mult = mult.real
    return c.with_coeffs(c.coeffs * mult)


def apply_kernel(f, params, t, r, rule=None, support=None):
    """exp(-(t/a) L) f(r) as the integral of f against T_r q_t, real t > 0.

    ``support=(lo, hi)`` integrates adaptively over that interval, for
    compactly supported f.
    """
    t = check_real("t", t, 0.0, low_open=True)
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise DomainError("apply_kernel requires r > 0")
    flat = r_arr.reshape(-1, 1)
    if support is not None:
        lo, hi = support
        out = integrate_adaptive(
            lambda s: np.exp(log_translated_kernel(params, flat, np.atleast_1d(s)[None, :], t))[:, 0]
            * np.asarray(f(s)), params, lo, hi)
    else:
        rule = rule or make_radial_rule(params)
        s = rule.nodes
        fw = np.asarray(f(s)) * rule.weights
        out = np.exp(log_translated_kernel(params, flat, s[None, :], t)) @ fw
    out = np.asarray(out)
    return float(out[0]) if r_arr.ndim == 0 else out.reshape(r_arr.shape)


def _hankel_kernel(params, r, s):
    a, alpha = params.a, params.alpha
    c = (2.0 / a) * np.power(np.multiply.outer(r, s), 0.5 * a)
    jn = specfun.bessel_j_normalized(alpha, c.ravel()).reshape(c.shape)
    return jn * math.exp(-alpha * math.log(a) - gammaln(alpha + 1.0))


def _hankel_nodes(params, r):
    # the rule is accurate while its largest node in u, about 8n, stays
    # beyond the evaluation points; size it from the largest r requested
    u_max = float(np.max(params.to_u(r))) if np.size(r) else 0.0
    n = max(HANKEL_NODES, 64 * math.ceil(u_max / 256.0))
    return min(n, HANKEL_MAX_NODES)


def hankel(f, params, r, rule=None, support=None):
    """H_{a,alpha} f(r) by quadrature of the defining integral.

    The default rule carries the weight e^{-u/2}, which is what a single
    basis-function factor contributes, and grows with the largest ``r`` so
    that compositions such as H(H f) stay accurate. ``support=(lo, hi)`` switches to
    adaptive quadrature for compactly supported f.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise DomainError("hankel requires r >= 0")
    flat = r_arr.reshape(-1)
    if support is not None:
        lo, hi = support
        out = integrate_adaptive(lambda s: _hankel_kernel(params, flat, s) * f(s), params, lo, hi)
    else:
        rule = rule or make_radial_rule(params, _hankel_nodes(params, flat), decay=HANKEL_DECAY)
        if rule.params != params:
            raise DomainError("radial rule was built for different params")
        s = rule.nodes
        out = _hankel_kernel(params, flat, s) @ (np.asarray(f(s)) * rule.weights)
    out = np.asarray(out)
    if r_arr.ndim == 0:
        return complex(out[0]) if np.iscomplexobj(out) else float(out[0])
    return out.reshape(r_arr.shape)


def _boundary_phase(alpha):
    return cmath.exp(0.5j * math.pi * (alpha + 1.0))


def hankel_spectral(c):
    """Hankel transform of a band-limited function via the boundary semigroup."""
    out = apply_spectral(c, 0.5j * math.pi)
    return out.with_coeffs(_boundary_phase(c.params.alpha) * out.coeffs)


def boundary_identity_residual(c, r, rule=None):
    """max_r |e^{(alpha+1) pi i/2} I_{i pi/2} f(r) - H f(r)| for band-limited f."""
    if not isinstance(c, SpectralCoeffs):
        raise DomainError("the boundary identity is evaluated on SpectralCoeffs only")
    r = np.atleast_1d(np.asarray(r, dtype=float))
    lhs = synthesize(hankel_spectral(c), r)
    rhs = hankel(c, c.params, r, rule)
    return float(np.max(np.abs(lhs - rhs)))


def lambda_kernel(ci, r, s, t):
    """Closed formula of the radial kernel Lambda^(m)(r, s; t) for real t > 0."""
    t = check_real("t", t, 0.0, low_open=True)
    a = ci.a
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    rs = r * s
    arg = (2.0 / a) * np.power(rs, 0.5 * a) / math.sinh(t)
    log_i, _ = specfun.bessel_i_log(ci.lam, np.ravel(arg))
    log_i = np.reshape(log_i, np.shape(arg))
    log_val = (-(ci.k_sum + 0.5 * ci.N - 1.0) * np.log(rs) - math.log(math.sinh(t))
               - (1.0 / math.tanh(t)) / a * (np.power(r, a) + np.power(s, a)) + log_i)
    return np.exp(log_val)


def psi(l, ci, r):
    """psi_{l,m}(r) = r^m phi_tilde_l^{a,lambda}(r), orthonormal for r^(2<k>+N+a-3) dr."""
    l = check_int("l", l)
    r = np.asarray(r, dtype=float)
    return np.power(r, ci.m) * phi_tilde_matrix(l, ci.params, r)[l]


def _reduced_coeffs(ci, f, L, rule):
    """Coefficients of g = r^{-m} f in the lambda basis."""
    if isinstance(f, SpectralCoeffs):
        if f.params != ci.params:
            raise DomainError("coefficients belong to a different system than the component")
        return f
    m = ci.m
    return analyze(lambda r: np.asarray(f(r)) * np.power(r, -float(m)), ci.params, L, rule)


def omega_radial_coeffs(ci, g, z):
    """Omega^(m)(gamma_z) acting on SpectralCoeffs of g = r^{-m} f."""
    if g.params != ci.params:
        raise DomainError("coefficients belong to a different system than the component")
    return apply_spectral(g, z)


def omega_radial(ci, f, z, s, method="spectral", L=DEFAULT_DEGREE, rule=None):
    """Radial part of the semigroup on component ``ci`` evaluated at ``s``.

    ``f`` is a callable of r, or the SpectralCoeffs of r^{-m} f in the
    lambda basis. ``method='kernel'`` integrates the closed Lambda kernel
    against f and needs real z > 0.
    """
    s = np.asarray(s, dtype=float)
    if method == "spectral":
        g = _reduced_coeffs(ci, f, L, rule)
        return np.power(s, ci.m) * synthesize(omega_radial_coeffs(ci, g, z), s)
    if method == "kernel":
        zt = as_time(z).z
        if zt.imag != 0 or zt.real <= 0:
            raise DomainError("the kernel path needs real z > 0")
        rule = rule or make_radial_rule(ci.params)
        if isinstance(f, SpectralCoeffs):
            fr = np.power(rule.nodes, ci.m) * synthesize(f, rule.nodes)
        else:
            fr = np.asarray(f(rule.nodes))
        # r^(2<k>+N+a-3) = r^(a lambda + a - 1) r^{-2m}
        w = fr * rule.weights * np.power(rule.nodes, -2.0 * ci.m)
        kern = lambda_kernel(ci, rule.nodes[None, :], s.reshape(-1, 1), zt.real)
        out = kern @ w
        return float(out[0]) if s.ndim == 0 else out.reshape(s.shape)
    raise DomainError(f"unknown method {method!r}")


def infinitesimal_generator_residual(ci, f, s, h=1e-5, L=DEFAULT_DEGREE, rule=None):
    """Difference quotient of Omega at z = 0 against -s^m (1/a) L (r^{-m} f).

    Returns max over ``s`` of |D_h - G| / max(1, |G|) where D_h is the
    forward difference with step ``h``; the residual is O(h).
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    g = _reduced_coeffs(ci, f, L, rule)
    quotient = (omega_radial(ci, g, h, s) - omega_radial(ci, g, 0.0, s)) / h
    gen = -np.power(s, ci.m) * apply_operator_pointwise(g, ci.params, s) / ci.a
    return float(np.max(np.abs(quotient - gen) / np.maximum(1.0, np.abs(gen))))
