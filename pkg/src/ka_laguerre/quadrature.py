"""Quadrature rules for the angle integral of the translation and for radial
integrals against d mu_{a,alpha}(r) = r^(a alpha + a - 1) dr.

Radial rules are generalized Gauss-Laguerre rules in the variable
u = (2/a) r^a. Integrands are always evaluated in r; the change of
variables and the Laguerre weight e^{-u} are folded into the stored
weights, which are assembled in the log domain so that nodes far out in
the tail neither overflow nor underflow.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad_vec
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln, roots_jacobi

from ._validation import (
    DomainError,
    EvaluationError,
    QuadratureError,
    check_int,
    check_real,
)

DEFAULT_RADIAL_NODES = 128
DEFAULT_THETA_NODES = 128


@dataclass(frozen=True)
class Params:
    """Deformation ``a > 0`` and type ``alpha >= -1/2`` of a Laguerre system."""

    a: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "a", check_real("a", self.a, 0.0, low_open=True))
        object.__setattr__(self, "alpha", check_real("alpha", self.alpha, -0.5))

    def to_u(self, r):
        """u = (2/a) r^a."""
        return (2.0 / self.a) * np.power(r, self.a)

    def from_u(self, u):
        return np.power(0.5 * self.a * np.asarray(u, dtype=float), 1.0 / self.a)

    def density(self, r):
        """Density of d mu_{a,alpha} with respect to dr."""
        return np.power(r, self.a * self.alpha + self.a - 1.0)


@dataclass(frozen=True)
class ThetaRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values, axis=-1):
        return np.tensordot(values, self.weights, axes=([axis], [0]))


@dataclass(frozen=True, eq=False)
class RadialRule:
    """Nodes and weights realizing the integral against d mu_{a,alpha}.

    ``decay`` selects the Laguerre weight exp(-decay * u) that the rule is
    exact against; 1 suits products of two basis functions, 1/2 suits
    integrands carrying a single basis-function factor.
    """

    params: Params
    nodes: np.ndarray
    weights: np.ndarray
    r_max: float
    decay: float = 1.0
    u_nodes: np.ndarray = field(repr=False, default=None)

    @property
    def n(self):
        return len(self.nodes)


def make_theta_rule(n=DEFAULT_THETA_NODES):
    """Gauss-Legendre rule mapped affinely from [-1, 1] to [0, pi]."""
    n = check_int("n", n, low=16)
    x, w = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * math.pi * (x + 1.0)
    weights = 0.5 * math.pi * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return ThetaRule(nodes, weights)


@lru_cache(maxsize=64)
def _gegenbauer_rule(alpha, n):
    x, w = roots_jacobi(n, alpha - 0.5, alpha - 0.5)
    return x, w


def make_sine_power_rule(alpha, n=64):
    """Rule for integrals over [0, pi] against (sin theta)^(2 alpha).

    Built from Gauss-Jacobi nodes in x = cos theta, where the weight
    becomes (1 - x^2)^(alpha - 1/2); the remaining integrand is analytic
    in x for every integrand the translation produces, unlike in theta
    where the weight has an algebraic endpoint singularity.
    """
    alpha = check_real("alpha", alpha, -0.5, low_open=True)
    n = check_int("n", n, low=16)
    x, w = _gegenbauer_rule(alpha, n)
    nodes = np.arccos(x)
    return ThetaRule(nodes, np.asarray(w))


def _laguerre_nodes(alpha, n):
    """Zeros of L_n^alpha and log Christoffel weights times e^u.

    Returns (u, log_w) with exp(log_w_i - u_i) the Gauss weight for
    weight function u^alpha e^{-u}. Initial guesses come from the Jacobi
    matrix; Newton iteration on the orthonormal recurrence polishes them.
    """
    k = np.arange(n, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt((k[1:]) * (k[1:] + alpha))
    u = eigh_tridiagonal(diag, off, eigvals_only=True)
    u = np.sort(u)

    def scaled_recurrence(x):
        # orthonormal polynomials divided by exp(log_scale), rescaled on the
        # fly so that neither large nodes nor high degrees overflow
        p_prev = np.zeros_like(x)
        p = np.full_like(x, math.exp(-0.5 * gammaln(alpha + 1.0)))
        log_scale = np.zeros_like(x)
        sq_sum = p * p
        for j in range(n - 1):
            nxt = ((2 * j + alpha + 1.0 - x) * p
                   - math.sqrt(j * (j + alpha)) * p_prev) / math.sqrt((j + 1) * (j + 1 + alpha))
            p_prev, p = p, nxt
            sq_sum += p * p
            big = np.abs(p) > 1e100
            if big.any():
                f = np.where(big, 1e-100, 1.0)
                p, p_prev, sq_sum = p * f, p_prev * f, sq_sum * f * f
                log_scale += np.where(big, 100.0 * math.log(10.0), 0.0)
        p_n = ((2 * (n - 1) + alpha + 1.0 - x) * p
               - math.sqrt((n - 1) * (n - 1 + alpha)) * p_prev) / math.sqrt(n * (n + alpha))
        return p_n, p, np.log(sq_sum) + 2.0 * log_scale

    converged = False
    for _ in range(100):
        p_n, p_nm1, _ = scaled_recurrence(u)
        # x p_n' = n p_n - sqrt(n (n + alpha)) p_{n-1}
        dp = (n * p_n - math.sqrt(n * (n + alpha)) * p_nm1) / u
        step = p_n / dp
        u = u - step
        if converged:
            break
        # one extra step once the correction is at rounding level
        converged = bool(np.all(np.abs(step) <= 1e-12 * np.maximum(1.0, u)))
    else:
        raise QuadratureError(f"Gauss-Laguerre Newton iteration did not converge (n={n}, alpha={alpha})")
    if np.any(np.diff(u) <= 0) or u[0] <= 0:
        raise QuadratureError("Gauss-Laguerre nodes are not strictly increasing")
    _, _, log_sq_sum = scaled_recurrence(u)
    # Christoffel: w_i = 1 / sum_k p_k(u_i)^2
    return u, u - log_sq_sum


@lru_cache(maxsize=128)
def _radial_rule_cached(a, alpha, n, decay):
    params = Params(a, alpha)
    v, log_w = _laguerre_nodes(alpha, n)
    # integral of g d mu = (1/2) (a/2)^alpha int g(r(u)) u^alpha du, u = v / decay
    u = v / decay
    log_const = math.log(0.5) + alpha * math.log(0.5 * a) - (alpha + 1.0) * math.log(decay)
    weights = np.exp(log_w + log_const)
    nodes = params.from_u(u)
    r_max = float(nodes[-1]) * 1.5
    for arr in (nodes, weights, u):
        arr.setflags(write=False)
    return RadialRule(params, nodes, weights, r_max, decay, u)


def make_radial_rule(params, n=DEFAULT_RADIAL_NODES, decay=1.0):
    """Generalized Gauss-Laguerre rule for d mu_{a,alpha} with ``n`` nodes."""
    if not isinstance(params, Params):
        raise DomainError("params must be a Params instance")
    n = check_int("n", n, low=32)
    decay = check_real("decay", decay, 0.0, low_open=True)
    return _radial_rule_cached(params.a, params.alpha, n, decay)


def integrate_rule(f, rule):
    """Sum of w_i f(r_i); ``f`` is called once with the node array."""
    values = np.asarray(f(rule.nodes))
    bad = ~np.isfinite(values)
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        raise EvaluationError(f"integrand not finite at node {idx} (r={rule.nodes[idx]!r})", index=idx)
    return values @ rule.weights


integrate = integrate_rule


def inner(f, g, rule):
    """<f, g> in L^2(d mu) without conjugation, as used for real bases."""
    return integrate_rule(lambda r: np.asarray(f(r)) * np.asarray(g(r)), rule)


def integrate_adaptive(f, params, lo=0.0, hi=None, rule=None, epsabs=1e-13, epsrel=1e-12,
                       limit=400):
    """Adaptive Gauss-Kronrod integral of f against d mu over [lo, hi].

    Fallback for oscillatory or compactly supported integrands where the
    Laguerre rule has too few nodes. ``hi`` defaults to the rule cutoff.
    Vector-valued ``f`` is handled through ``quad_vec``.
    """
    if hi is None:
        rule = rule or make_radial_rule(params)
        hi = rule.r_max
    lo = check_real("lo", lo, 0.0)
    hi = check_real("hi", hi, lo)

    def integrand(r):
        return np.asarray(f(r)) * params.density(r)

    value, err = quad_vec(integrand, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=limit)
    if not np.all(np.isfinite(value)):
        raise QuadratureError("adaptive quadrature produced a non-finite value")
    return value
