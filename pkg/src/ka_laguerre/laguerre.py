"""The a-deformed Laguerre system on (0, inf) with measure d mu_{a,alpha}.

Basis functions, analysis/synthesis in the normalized eigenbasis and the
operator

    L_{a,alpha} = -r^(2-a) d^2/dr^2 + r^a - (a alpha + 1) r^(1-a) d/dr,

both pointwise (finite differences) and spectrally (diagonal multiplier
a (2l + alpha + 1)).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import specfun
from ._validation import DomainError, EvaluationError, check_int
from .quadrature import Params, integrate_adaptive, make_radial_rule

__all__ = [
    "Params",
    "SpectralCoeffs",
    "HolomorphicTime",
    "DEFAULT_DEGREE",
    "eigenvalue",
    "phi",
    "phi_tilde",
    "phi_tilde_matrix",
    "analyze",
    "synthesize",
    "apply_operator_pointwise",
    "apply_operator_spectral",
]

DEFAULT_DEGREE = 40


@dataclass(frozen=True, eq=False)
class SpectralCoeffs:
    """Coefficients c_0..c_L of a function in the basis phi_tilde_l."""

    params: Params
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, copy=True)
        if c.ndim != 1 or c.size == 0:
            raise DomainError("coeffs must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise DomainError("coeffs must be finite")
        if not np.iscomplexobj(c):
            c = c.astype(float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def L(self):
        return len(self.coeffs) - 1

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def with_coeffs(self, coeffs):
        return SpectralCoeffs(self.params, coeffs)

    def __add__(self, other):
        _check_compatible(self, other)
        return self.with_coeffs(self.coeffs + other.coeffs)

    def __sub__(self, other):
        _check_compatible(self, other)
        return self.with_coeffs(self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return self.with_coeffs(self.coeffs * scalar)

    __rmul__ = __mul__

    def __call__(self, r):
        return synthesize(self, r)

    @classmethod
    def basis(cls, params, l, L=DEFAULT_DEGREE):
        c = np.zeros(max(L, l) + 1)
        c[l] = 1.0
        return cls(params, c)

    @classmethod
    def from_dict(cls, params, terms, L=None):
        """Build from {l: c_l}; degree defaults to the largest index."""
        top = max(terms) if terms else 0
        c = np.zeros((L if L is not None else top) + 1, dtype=complex if any(
            isinstance(v, complex) for v in terms.values()) else float)
        for l, v in terms.items():
            c[l] = v
        return cls(params, c)


def _check_compatible(c1, c2):
    if c1.params != c2.params or c1.L != c2.L:
        raise DomainError("spectral coefficient vectors have different params or degree")


@dataclass(frozen=True)
class HolomorphicTime:
    """Semigroup parameter z with Re z >= 0."""

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError("z must be finite")
        if z.real < 0:
            raise DomainError(f"Re z must be >= 0, got {z}")
        object.__setattr__(self, "z", z)

    @property
    def boundary(self):
        return self.z.real == 0


def as_time(z):
    return z if isinstance(z, HolomorphicTime) else HolomorphicTime(z)


def eigenvalue(l, params):
    """a (2l + alpha + 1); ``l`` may be an integer array."""
    return params.a * (2.0 * np.asarray(l) + params.alpha + 1.0)


def phi(l, params, r):
    """Unnormalized Laguerre function L_l^alpha((2/a) r^a) exp(-r^a / a)."""
    l = check_int("l", l)
    r = np.asarray(r, dtype=float)
    u = params.to_u(r)
    out = specfun.laguerre_poly(l, params.alpha, u) * np.exp(-0.5 * u)
    return float(out) if np.ndim(out) == 0 else out


def _log_norm_constant(params):
    # phi_tilde_l = sqrt(2^{alpha+1} / a^alpha) * p_l(u) e^{-u/2}, p_l orthonormal
    return 0.5 * ((params.alpha + 1.0) * math.log(2.0) - params.alpha * math.log(params.a))


def phi_tilde_matrix(L, params, r):
    """Rows l = 0..L of phi_tilde_l evaluated at the points ``r``.

    Uses the recurrence of the orthonormal Laguerre polynomials seeded
    with e^{-u/2}, which keeps every entry finite for large u and l.
    """
    L = check_int("L", L)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("phi_tilde requires r >= 0")
    alpha = params.alpha
    u = params.to_u(r)
    out = np.empty((L + 1,) + u.shape)
    p_prev = np.zeros_like(u)
    p = np.exp(_log_norm_constant(params) - 0.5 * gammaln(alpha + 1.0) - 0.5 * u)
    out[0] = p
    for j in range(L):
        nxt = ((2 * j + alpha + 1.0 - u) * p
               - math.sqrt(j * (j + alpha)) * p_prev) / math.sqrt((j + 1) * (j + 1 + alpha))
        p_prev, p = p, nxt
        out[j + 1] = p
    return out


def phi_tilde(l, params, r):
    """Normalized Laguerre function of type alpha; unit norm in L^2(d mu)."""
    l = check_int("l", l)
    out = phi_tilde_matrix(l, params, r)[l]
    return float(out) if np.ndim(out) == 0 else out


def analyze(f, params, L=DEFAULT_DEGREE, rule=None, support=None):
    """Coefficients c_l = <f, phi_tilde_l> for l = 0..L.

    ``f`` is a callable of r, or a SpectralCoeffs (re-expanded to degree L).
    With ``support=(lo, hi)`` the integrals use adaptive quadrature on that
    interval, which is needed for compactly supported, non-analytic f.
    """
    L = check_int("L", L)
    if isinstance(f, SpectralCoeffs):
        if f.params != params:
            raise DomainError("cannot re-analyze coefficients in a different system")
        c = np.zeros(L + 1, dtype=f.coeffs.dtype)
        m = min(L, f.L) + 1
        c[:m] = f.coeffs[:m]
        return SpectralCoeffs(params, c)
    if support is not None:
        lo, hi = support
        coeffs = integrate_adaptive(lambda r: f(r) * phi_tilde_matrix(L, params, r), params,
                                    lo, hi)
        return SpectralCoeffs(params, np.asarray(coeffs))
    rule = rule or make_radial_rule(params)
    if rule.params != params:
        raise DomainError("radial rule was built for different params")
    values = np.asarray(f(rule.nodes))
    if not np.all(np.isfinite(values)):
        idx = int(np.flatnonzero(~np.isfinite(values))[0])
        raise EvaluationError(f"f not finite at node {idx}", index=idx)
    basis = phi_tilde_matrix(L, params, rule.nodes)
    return SpectralCoeffs(params, basis @ (values * rule.weights))


def synthesize(c, r):
    """sum_l c_l phi_tilde_l(r)."""
    r = np.asarray(r, dtype=float)
    out = np.tensordot(c.coeffs, phi_tilde_matrix(c.L, c.params, r), axes=(0, 0))
    if np.ndim(out) == 0:
        return complex(out) if np.iscomplexobj(out) else float(out)
    return out


def apply_operator_pointwise(f, params, r):
    """L_{a,alpha} f(r) by central differences, step max(1e-5, 1e-5 r)."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("pointwise operator requires r > 0")
    a, alpha = params.a, params.alpha
    h = np.maximum(1e-5, 1e-5 * r)
    f0 = np.asarray(f(r))
    fp = np.asarray(f(r + h))
    fm = np.asarray(f(r - h))
    d2 = (fp - 2.0 * f0 + fm) / (h * h)
    d1 = (fp - fm) / (2.0 * h)
    out = -np.power(r, 2.0 - a) * d2 + np.power(r, a) * f0 - (a * alpha + 1.0) * np.power(r, 1.0 - a) * d1
    if np.ndim(out) == 0:
        return complex(out) if np.iscomplexobj(out) else float(out)
    return out


def apply_operator_spectral(c):
    """Multiply c_l by a (2l + alpha + 1)."""
    return c.with_coeffs(c.coeffs * eigenvalue(np.arange(c.L + 1), c.params))
