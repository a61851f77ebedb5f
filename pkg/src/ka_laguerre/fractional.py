"""Fractional powers of L_{a,alpha}, the subordination identity behind the
modified power, and the constants and weights of the Hardy inequalities.

Two fractional powers act diagonally on the normalized basis:

    pure      (a (2l + alpha + 1))^sigma
    modified  (2a)^sigma S_l,  S_l = Gamma(lam_l/2 + (1+sigma)/2) / Gamma(lam_l/2 + (1-sigma)/2)

with lam_l = 2l + alpha + 1.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln, gammasgn

from . import specfun
from ._validation import DomainError, QuadratureError, check_int, check_real
from .laguerre import SpectralCoeffs, synthesize
from .quadrature import Params, make_radial_rule

__all__ = [
    "FractionalParams",
    "multiplier_S",
    "modified_multiplier",
    "apply_modified_fractional",
    "apply_pure_fractional",
    "abs_gamma_neg",
    "lemma42_integrals",
    "lemma42_lhs",
    "lemma42_residual",
    "subordination_multiplier",
    "semigroup_subordination_residual",
    "hardy_constant_B",
    "hardy_weight_omega",
    "weight_ratio",
    "gamma_monotonicity_margin",
    "gamma_monotonicity_check",
    "apply_delta_ka_sigma",
    "hardy_step_margin",
]


@dataclass(frozen=True)
class FractionalParams:
    """Order ``0 < sigma < 1`` and shift ``delta > 0``."""

    sigma: float
    delta: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "sigma", _check_sigma(self.sigma))
        object.__setattr__(self, "delta", check_real("delta", self.delta, 0.0, low_open=True))


def _check_sigma(sigma):
    return check_real("sigma", sigma, 0.0, 1.0, low_open=True, high_open=True)


def _log_gamma_ratio(p, q):
    """(ln |Gamma(p)/Gamma(q)|, sign) for arguments off the poles."""
    return gammaln(p) - gammaln(q), gammasgn(p) * gammasgn(q)


def multiplier_S(l, params, sigma):
    """S_l^{a,alpha;sigma}; ``l`` may be an integer array."""
    sigma = _check_sigma(sigma)
    half = 0.5 * (2.0 * np.asarray(l, dtype=float) + params.alpha + 1.0)
    out = np.exp(gammaln(half + 0.5 * (1.0 + sigma)) - gammaln(half + 0.5 * (1.0 - sigma)))
    return float(out) if np.ndim(out) == 0 else out


def modified_multiplier(l, params, sigma):
    """(2a)^sigma S_l, the spectral value of L_{a,alpha;sigma}."""
    return (2.0 * params.a) ** sigma * multiplier_S(l, params, sigma)


def apply_modified_fractional(c, sigma):
    return c.with_coeffs(c.coeffs * modified_multiplier(np.arange(c.L + 1), c.params, sigma))


def apply_pure_fractional(c, sigma):
    """c_l -> (a (2l + alpha + 1))^sigma c_l for any real sigma >= 0."""
    sigma = check_real("sigma", sigma, 0.0)
    lam = c.params.a * (2.0 * np.arange(c.L + 1) + c.params.alpha + 1.0)
    if sigma == 1.0:
        return c.with_coeffs(c.coeffs * lam)
    return c.with_coeffs(c.coeffs * np.power(lam, sigma))


def abs_gamma_neg(sigma):
    """|Gamma(-sigma)| = Gamma(1 - sigma) / sigma for 0 < sigma < 1."""
    sigma = _check_sigma(sigma)
    return math.exp(gammaln(1.0 - sigma)) / sigma


def _log_sinh(t):
    return t + np.log1p(-np.exp(-2.0 * t)) - math.log(2.0)


def _near_zero_parts(sigma, lam):
    # smooth factors left after pulling t^(1-sigma) and t^(-sigma) out on [0, 1]
    def first(t):
        t = np.maximum(t, 1e-300)
        return 2.0 * (np.sinh(0.5 * t) / t) ** 2 * (t / np.sinh(t)) ** (sigma + 1.0)

    def second(t):
        t = np.maximum(t, 1e-300)
        return -np.expm1(-lam * t) / t * (t / np.sinh(t)) ** (sigma + 1.0)

    return first, second


def lemma42_integrals(sigma, lam, epsabs=1e-14, epsrel=1e-13):
    """The two integrals of (cosh t - 1) and (1 - e^{-lam t}) against (sinh t)^{-sigma-1}.

    On [0, 1] the algebraic endpoint behaviour is handed to QUADPACK's
    algebraic weight after factoring it out analytically; on [1, inf) the
    integrands are evaluated through ln sinh to stay finite.
    """
    sigma = _check_sigma(sigma)
    lam = check_real("lam", lam)
    if lam + sigma <= -1.0:
        raise DomainError(f"need lam + sigma > -1, got lam={lam}, sigma={sigma}")
    first, second = _near_zero_parts(sigma, lam)
    opts = dict(epsabs=epsabs, epsrel=epsrel, limit=200)

    def tail_first(t):
        # (cosh t - 1) = 2 sinh^2(t/2)
        return math.exp(math.log(2.0) + 2.0 * _log_sinh(0.5 * t) - (sigma + 1.0) * _log_sinh(t))

    def tail_second(t):
        if lam >= 0:
            return -math.expm1(-lam * t) * math.exp(-(sigma + 1.0) * _log_sinh(t))
        # 1 - e^{-lam t} = -e^{-lam t} (1 - e^{lam t}) grows; keep it inside the exponent
        return math.expm1(lam * t) * math.exp(-lam * t - (sigma + 1.0) * _log_sinh(t))

    results = []
    for near, tail, power in ((first, tail_first, 1.0 - sigma), (second, tail_second, -sigma)):
        head, e1 = integrate.quad(near, 0.0, 1.0, weight="alg", wvar=(power, 0.0), **opts)
        rest, e2 = integrate.quad(tail, 1.0, np.inf, **opts)
        err = e1 + e2
        value = head + rest
        if not math.isfinite(value) or err > 1e-9 * max(1.0, abs(value)):
            raise QuadratureError(f"Gamma-ratio integral did not converge (sigma={sigma}, lam={lam}, err={err})")
        results.append(value)
    return tuple(results)


def lemma42_lhs(sigma, lam):
    """2^sigma |Gamma(-sigma)| Gamma(lam/2 + (1+sigma)/2) / Gamma(lam/2 + (1-sigma)/2)."""
    sigma = _check_sigma(sigma)
    log_r, sign = _log_gamma_ratio(0.5 * lam + 0.5 * (1.0 + sigma), 0.5 * lam + 0.5 * (1.0 - sigma))
    return sign * 2.0 ** sigma * abs_gamma_neg(sigma) * math.exp(log_r)


def lemma42_residual(sigma, lam):
    """|closed form - integral form| of the Gamma-ratio integral identity."""
    first, second = lemma42_integrals(sigma, lam)
    return abs(lemma42_lhs(sigma, lam) - (first + second))


def subordination_multiplier(l, params, sigma):
    """E_sigma + a^sigma / |Gamma(-sigma)| int (1 - e^{-t lam_l}) (sinh t)^{-sigma-1} dt.

    This is the spectral value of the subordinated form of L_{a,alpha;sigma},
    with every integral done by quadrature.
    """
    sigma = _check_sigma(sigma)
    scale = params.a ** sigma / abs_gamma_neg(sigma)
    ls = np.atleast_1d(np.asarray(l))
    out = np.empty(ls.shape)
    e_sigma = None
    for i, li in enumerate(ls):
        first, second = lemma42_integrals(sigma, 2.0 * li + params.alpha + 1.0)
        if e_sigma is None:
            e_sigma = scale * first
        out[i] = e_sigma + scale * second
    return float(out[0]) if np.ndim(l) == 0 else out


def semigroup_subordination_residual(c, sigma, rule=None):
    """Sup over rule nodes of the subordinated form minus L_{a,alpha;sigma} f."""
    if not isinstance(c, SpectralCoeffs):
        raise DomainError("subordination residual is evaluated on SpectralCoeffs")
    rule = rule or make_radial_rule(c.params)
    active = np.flatnonzero(c.coeffs != 0)
    if active.size == 0:
        return 0.0
    diff = np.zeros_like(c.coeffs, dtype=float if not np.iscomplexobj(c.coeffs) else complex)
    sub = subordination_multiplier(active, c.params, sigma)
    diff[active] = c.coeffs[active] * (sub - modified_multiplier(active, c.params, sigma))
    return float(np.max(np.abs(synthesize(c.with_coeffs(diff), rule.nodes))))


def hardy_constant_B(alpha, sigma, delta):
    """delta^sigma Gamma((alpha+2+sigma)/2) / Gamma((alpha+2-sigma)/2)."""
    alpha = check_real("alpha", alpha, -0.5)
    sigma = _check_sigma(sigma)
    delta = check_real("delta", delta, 0.0, low_open=True)
    return delta ** sigma * math.exp(gammaln(0.5 * (alpha + 2.0 + sigma)) - gammaln(0.5 * (alpha + 2.0 - sigma)))


def hardy_weight_omega(alpha, sigma, delta, a, r):
    """omega^{delta,a}_{alpha,sigma}(r) with a Macdonald function of order (alpha+1+sigma)/2.

    ``sigma`` may be negative (|sigma| < 1), which is how the ratio
    omega_sigma / omega_{-sigma} is formed.
    """
    alpha = check_real("alpha", alpha, -0.5)
    sigma = check_real("sigma", sigma, -1.0, 1.0, low_open=True, high_open=True)
    delta = check_real("delta", delta, 0.0, low_open=True)
    a = check_real("a", a, 0.0, low_open=True)
    x = delta + (2.0 / a) * np.power(np.asarray(r, dtype=float), a)
    nu = 0.5 * (alpha + 1.0 + sigma)
    log_c = 0.5 * math.log(math.pi) + (1.0 - sigma) * math.log(2.0) - gammaln(0.5 * (alpha + 2.0 + sigma))
    out = np.exp(log_c - nu * np.log(x) + specfun.macdonald_k_log(nu, 0.5 * x))
    return float(out) if np.ndim(out) == 0 else out


def weight_ratio(alpha, sigma, delta, a, r):
    """omega_sigma / omega_{-sigma}, assembled in the log domain."""
    alpha = check_real("alpha", alpha, -0.5)
    sigma = _check_sigma(sigma)
    x = delta + (2.0 / a) * np.power(np.asarray(r, dtype=float), a)
    nu = 0.5 * (alpha + 1.0)
    log_const = (-2.0 * sigma * math.log(2.0) + gammaln(0.5 * (alpha + 2.0 - sigma))
                 - gammaln(0.5 * (alpha + 2.0 + sigma)))
    out = np.exp(log_const - sigma * np.log(x) + specfun.macdonald_k_log(nu + 0.5 * sigma, 0.5 * x)
                 - specfun.macdonald_k_log(nu - 0.5 * sigma, 0.5 * x))
    return float(out) if np.ndim(out) == 0 else out


def gamma_monotonicity_margin(t, tau, v):
    """1 - [Gamma(t+v)/Gamma(tau+v)] / [Gamma(t)/Gamma(tau)], positive when the inequality holds."""
    t = check_real("t", t, 0.0, low_open=True)
    tau = check_real("tau", tau, t, low_open=True)
    v = check_real("v", v, 0.0, low_open=True)
    d = (gammaln(t + v) - gammaln(tau + v)) - (gammaln(t) - gammaln(tau))
    return -math.expm1(d)


def gamma_monotonicity_check(t, tau, v):
    """Gamma(t+v)/Gamma(tau+v) < Gamma(t)/Gamma(tau) for 0 < t < tau, v > 0."""
    return gamma_monotonicity_margin(t, tau, v) > 1e-13


def apply_delta_ka_sigma(dec, sigma):
    """(-Delta_{k,a})_sigma per mode: L_{a,lambda_m;sigma} on each g_{m,j}."""
    sigma = _check_sigma(sigma)
    return dec.map_modes(lambda ci, g: apply_modified_fractional(g, sigma))


def hardy_step_margin(N, k_sum, a, fp, r, m_max=10):
    """Smallest relative margin of the per-mode step of the N-dimensional Hardy proof.

    For each m <= m_max with a valid component, compares
    delta^sigma Gamma((lam_m+2+sigma)/2)/Gamma((lam_m+2-sigma)/2) times the
    Macdonald ratio K_{nu+sigma/2}/K_{nu-sigma/2}((delta+u)/2), nu = (lam_m+1)/2,
    with B at lam_a; the common factors (a/2)^sigma (delta+u)^{-sigma}
    cancel. Returns min over m and r of (left - right) / right.
    """
    m_max = check_int("m_max", m_max)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    x = fp.delta + (2.0 / a) * np.power(r, a)
    lam_a = (2.0 * k_sum + N - 2.0) / a
    right = hardy_constant_B(lam_a, fp.sigma, fp.delta)
    worst = math.inf
    for m in range(m_max + 1):
        lam = (2.0 * m + 2.0 * k_sum + N - 2.0) / a
        if lam < -0.5:
            continue
        nu = 0.5 * (lam + 1.0)
        k_ratio = np.exp(specfun.macdonald_k_log(nu + 0.5 * fp.sigma, 0.5 * x)
                         - specfun.macdonald_k_log(nu - 0.5 * fp.sigma, 0.5 * x))
        left = hardy_constant_B(lam, fp.sigma, fp.delta) * k_ratio
        worst = min(worst, float(np.min((left - right) / right)))
    return worst
