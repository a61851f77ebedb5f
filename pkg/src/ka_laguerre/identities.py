"""The invariant suite: each check evaluates one identity on one parameter
set and returns its worst residual next to a fixed threshold.

Checks are independent, so the suite may run them on several threads;
results always come back in suite order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import specfun
from .fractional import lemma42_residual
from .laguerre import SpectralCoeffs, phi, phi_tilde_matrix
from .quadrature import Params, make_radial_rule
from .semigroup import ComponentIndex, boundary_identity_residual, infinitesimal_generator_residual, psi
from .transport import bilinear_kernel_series, convolve, translate, translated_kernel_closed

__all__ = ["BATTERY", "IdentityResult", "suite", "run_suite", "RESULT_FIELDS"]

BATTERY = ((1.0, -0.5), (1.0, 0.0), (1.5, 0.25), (2.0, 0.0), (2.0, 1.0), (0.8, 2.0))
GRID = np.linspace(0.2, 3.0, 5)
RESULT_FIELDS = ["check", "params", "residual", "threshold", "pass"]


@dataclass(frozen=True)
class IdentityResult:
    check: str
    params: str
    residual: float
    threshold: float

    @property
    def passed(self):
        return bool(self.residual <= self.threshold)

    def row(self):
        return {"check": self.check, "params": self.params, "residual": self.residual,
                "threshold": self.threshold, "pass": self.passed}


def _label(p):
    return f"a={p.a:g};alpha={p.alpha:g}"


def kernel_series_agreement(p):
    """Closed translated kernel against the bilinear series, relative."""
    worst = 0.0
    for t in (0.3, 0.7, 1.5):
        for r in (0.3, 1.0, 2.0):
            for s in (0.5, 1.3):
                closed = translated_kernel_closed(p, r, s, t).to_complex().real
                worst = max(worst, abs(closed / bilinear_kernel_series(p, r, s, t) - 1.0))
    return IdentityResult("kernel_closed_vs_series", _label(p), worst, 1e-10)


def product_formula(p):
    """T_r phi_n(s) = n!/(alpha+1)_n phi_n(r) phi_n(s), n <= 8, 5x5 grid."""
    worst = 0.0
    for n in range(9):
        const = math.factorial(n) / specfun.pochhammer(p.alpha + 1.0, n)
        phi_grid = phi(n, p, GRID)
        for i, r in enumerate(GRID):
            lhs = translate(lambda x, n=n: phi(n, p, x), p, r, GRID)
            worst = max(worst, float(np.max(np.abs(lhs - const * phi_grid[i] * phi_grid))))
    return IdentityResult("translation_product_formula", _label(p), worst, 1e-9)


def convolution_orthogonality(p):
    """(2^{alpha+1}/(a^alpha Gamma(alpha+1))) phi_n * phi_j = delta_nj phi_n, n, j <= 5."""
    rule = make_radial_rule(p)
    const = math.exp((p.alpha + 1.0) * math.log(2.0) - p.alpha * math.log(p.a)
                     - math.lgamma(p.alpha + 1.0))
    worst = 0.0
    for n in range(6):
        for j in range(6):
            for r in (0.5, 1.3):
                value = const * convolve(lambda x: phi(n, p, x), lambda x: phi(j, p, x), p, r, rule)
                expect = phi(n, p, r) if n == j else 0.0
                worst = max(worst, abs(value - expect))
    return IdentityResult("convolution_orthogonality", _label(p), worst, 1e-8)


def gram_identity(p, L=20):
    rule = make_radial_rule(p)
    basis = phi_tilde_matrix(L, p, rule.nodes)
    gram = (basis * rule.weights) @ basis.T
    return IdentityResult("basis_gram", _label(p), float(np.max(np.abs(gram - np.eye(L + 1)))), 1e-8)


def boundary_identity(p):
    """Hankel transform against the phased boundary semigroup on band-limited input."""
    r = np.linspace(0.2, 3.0, 7)
    worst = 0.0
    for terms in ({0: 1.0}, {2: 1.0, 5: -0.5}, {1: 0.7, 6: 0.3}):
        c = SpectralCoeffs.from_dict(p, terms, L=8)
        worst = max(worst, boundary_identity_residual(c, r))
    return IdentityResult("hankel_boundary_identity", _label(p), worst, 1e-7)


def lemma42_grid():
    worst = max(lemma42_residual(s, lam) for s in (0.1, 0.3, 0.5, 0.7, 0.9) for lam in (0.5, 1.0, 3.0, 7.5))
    return IdentityResult("gamma_integral_identity", "sigma x lambda grid", worst, 1e-7)


def component_grid():
    out = []
    for N in (1, 2):
        for k in (0.0, 0.75):
            for a in (1.0, 2.0):
                for m in (0, 1, 2):
                    if ComponentIndex.type_of(N, k, a, m) >= -0.5:
                        out.append(ComponentIndex(N, k, a, m))
    return out


def generator_residual(ci):
    s = np.linspace(0.3, 2.5, 6)
    worst = max(infinitesimal_generator_residual(ci, lambda r, l=l: psi(l, ci, r), s) for l in (0, 2))
    label = f"N={ci.N};k={ci.k_sum:g};a={ci.a:g};m={ci.m}"
    return IdentityResult("semigroup_generator", label, worst, 1e-4)


def suite(battery=BATTERY):
    """Ordered list of zero-argument checks."""
    checks = []
    for a, alpha in battery:
        p = Params(a, alpha)
        for fn in (gram_identity, kernel_series_agreement, product_formula, convolution_orthogonality,
                   boundary_identity):
            checks.append(lambda fn=fn, p=p: fn(p))
    checks.append(lemma42_grid)
    for ci in component_grid():
        checks.append(lambda ci=ci: generator_residual(ci))
    return checks


def run_suite(battery=BATTERY, threads=1):
    checks = suite(battery)
    if threads <= 1:
        return [c() for c in checks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: c(), checks))
