"""Numerical certification of the Hardy inequality chains.

For the one-dimensional system the chain is

    (a/2)^s B int |f|^2 (delta+u)^{-s} d mu
        <= (2a/delta)^s B^2 int |f|^2 omega_s / omega_{-s} d mu
        <= <L_{a,alpha;s} f, f>,

with u = (2/a) r^a and B = B^delta_{alpha,s}. The right member is summed
from the spectral coefficients; since every multiplier is positive a
truncated sum is a lower bound, so a pass with it is a valid
certification. The Parseval deficit of the truncation is reported as
``tail``.

The N-dimensional chain is checked per spherical mode with the constant
taken at lambda_a.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional

import numpy as np

from ._validation import DomainError
from .fractional import (
    FractionalParams,
    hardy_constant_B,
    modified_multiplier,
    weight_ratio,
)
from .laguerre import analyze, phi_tilde, phi_tilde_matrix
from .quadrature import Params, integrate_adaptive, make_radial_rule
from .spherical import radial_projection

__all__ = [
    "HardyReport",
    "CorpusEntry",
    "TestCorpus",
    "default_corpus",
    "bump",
    "verify_1d",
    "verify_nd",
    "sweep",
    "REPORT_FIELDS",
]

REPORT_FIELDS = ["a", "alpha", "sigma", "delta", "corpus", "lhs", "mid", "rhs", "margin1", "margin2", "pass"]


@dataclass
class HardyReport:
    """Members of one inequality chain and its margins.

    ``passed`` holds when lhs <= mid + tol and mid <= rhs + tol with
    tol = 1e-8 max(1, rhs). ``alpha`` is lambda_a for N-dimensional
    reports, whose ``model`` field names the reduced model.
    """

    a: float
    alpha: float
    sigma: float
    delta: float
    corpus: str
    lhs: float = math.nan
    mid: float = math.nan
    rhs: float = math.nan
    tail: float = math.nan
    model: str = ""
    error: Optional[str] = None

    @property
    def margin_lhs_mid(self):
        return self.mid - self.lhs

    @property
    def margin_mid_rhs(self):
        return self.rhs - self.mid

    @property
    def tol(self):
        return 1e-8 * max(1.0, self.rhs)

    @property
    def passed(self):
        if self.error is not None:
            return False
        return bool(self.lhs <= self.mid + self.tol and self.mid <= self.rhs + self.tol)

    def row(self):
        """Flat record keyed by REPORT_FIELDS."""
        return {
            "a": self.a, "alpha": self.alpha, "sigma": self.sigma, "delta": self.delta,
            "corpus": self.corpus, "lhs": self.lhs, "mid": self.mid, "rhs": self.rhs,
            "margin1": self.margin_lhs_mid, "margin2": self.margin_mid_rhs, "pass": self.passed,
        }


def bump(r):
    """exp(-1/((r-1)(2-r))) on (1, 2), zero elsewhere."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = (r > 1.0) & (r < 2.0)
    ri = r[inside]
    out[inside] = np.exp(-1.0 / ((ri - 1.0) * (2.0 - ri)))
    return out


@dataclass(frozen=True)
class CorpusEntry:
    """A test function built for given Params, with its expansion degree.

    ``support`` marks compactly supported entries, which are integrated
    adaptively over that interval instead of with the Laguerre rule.
    """

    name: str
    build: Callable
    L: int = 40
    support: Optional[tuple] = None


@dataclass(frozen=True)
class TestCorpus:
    entries: tuple = field(default_factory=tuple)

    __test__ = False  # keep pytest from collecting this class

    def names(self):
        return [e.name for e in self.entries]

    def get(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise DomainError(f"unknown corpus entry {name!r}; known: {', '.join(self.names())}")

    def subset(self, names):
        return TestCorpus(tuple(self.get(n) for n in names))


def _phi(l):
    return lambda p: (lambda r: phi_tilde_matrix(l, p, r)[l])


def _gauss(p):
    a = p.a
    return lambda r: np.asarray(r, dtype=float) ** 2 * np.exp(-np.power(r, a) / a)


def _mixture(p):
    return lambda r: 0.7 * phi_tilde(1, p, r) + 0.3 * phi_tilde(6, p, r)


def default_corpus():
    return TestCorpus((
        CorpusEntry("phi0", _phi(0)),
        CorpusEntry("phi3", _phi(3)),
        CorpusEntry("gauss", _gauss),
        CorpusEntry("bump", lambda p: bump, L=120, support=(1.0, 2.0)),
        CorpusEntry("mixture", _mixture),
    ))


def _weighted(f, params, weight, support, rule):
    """int |f|^2 weight d mu."""
    if support is not None:
        lo, hi = support
        return float(integrate_adaptive(lambda r: np.abs(f(r)) ** 2 * weight(r), params, lo, hi))
    rule = rule or make_radial_rule(params)
    return float((np.abs(np.asarray(f(rule.nodes))) ** 2 * weight(rule.nodes)) @ rule.weights)


def _chain_terms(f, params, fp, L, support, rule):
    """(lhs-integral, mid-integral, rhs, tail) for one radial function at params."""
    a, alpha, s, d = params.a, params.alpha, fp.sigma, fp.delta

    def potential(r):
        return np.power(d + params.to_u(r), -s)

    lhs_int = _weighted(f, params, potential, support, rule)
    mid_int = _weighted(f, params, lambda r: weight_ratio(alpha, s, d, a, r), support, rule)
    c = analyze(f, params, L, rule, support)
    mult = modified_multiplier(np.arange(c.L + 1), params, s)
    energy = np.abs(c.coeffs) ** 2
    rhs = float(np.sum(mult * energy))
    norm2 = _weighted(f, params, lambda r: np.ones_like(r), support, rule)
    tail = max(norm2 - float(energy.sum()), 0.0)
    return lhs_int, mid_int, rhs, tail


def verify_1d(f, params, fp, name="f", L=40, support=None, rule=None):
    """Evaluate the one-dimensional chain for the radial function ``f``."""
    report = HardyReport(params.a, params.alpha, fp.sigma, fp.delta, name)
    B = hardy_constant_B(params.alpha, fp.sigma, fp.delta)
    lhs_int, mid_int, rhs, tail = _chain_terms(f, params, fp, L, support, rule)
    report.lhs = (0.5 * params.a) ** fp.sigma * B * lhs_int
    report.mid = (2.0 * params.a / fp.delta) ** fp.sigma * B * B * mid_int
    report.rhs = rhs
    report.tail = tail
    return report


def verify_nd(f, model, fp, name="f", L=40, rules=None, support=None):
    """Evaluate the N-dimensional chain mode by mode on a reduced model.

    lhs uses B at lambda_a for every mode; the middle member sums the
    one-dimensional middle members at lambda_m; rhs sums the quadratic
    forms of L_{a,lambda_m;sigma} on g_m = r^{-m} f_m.
    """
    rules = rules or {}
    lam_a = model.lam_a
    report = HardyReport(model.a, lam_a, fp.sigma, fp.delta, name, model=model.kind)
    B_a = hardy_constant_B(lam_a, fp.sigma, fp.delta)
    scale = (0.5 * model.a) ** fp.sigma
    lhs = mid = rhs = tail = 0.0
    for m, j in model.modes():
        ci = model.component(m)
        p = ci.params
        g = radial_projection(f, model, m, j)
        B_m = hardy_constant_B(p.alpha, fp.sigma, fp.delta)
        lhs_int, mid_int, rhs_m, tail_m = _chain_terms(g, p, fp, L, support, rules.get(m))
        lhs += scale * B_a * lhs_int
        mid += (2.0 * model.a / fp.delta) ** fp.sigma * B_m * B_m * mid_int
        rhs += rhs_m
        tail += tail_m
    report.lhs, report.mid, report.rhs, report.tail = lhs, mid, rhs, tail
    return report


def _sweep_row(point, corpus):
    a, alpha, sigma, delta, entry = point
    report = HardyReport(a, alpha, sigma, delta, entry.name)
    try:
        params = Params(a, alpha)
        fp = FractionalParams(sigma, delta)
        return verify_1d(entry.build(params), params, fp, entry.name, entry.L, entry.support)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        report.error = f"{type(exc).__name__}: {exc}"
        return report


def default_threads():
    """Worker count from KA_LAGUERRE_THREADS, default 1."""
    raw = os.environ.get("KA_LAGUERRE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"KA_LAGUERRE_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise DomainError(f"KA_LAGUERRE_THREADS must be a positive integer, got {raw!r}")
    return n


def sweep(a_values, alpha_values, sigma_values, delta_values, corpus=None, threads=None):
    """verify_1d over the grid in lexicographic order (a, alpha, sigma, delta, corpus).

    A grid point that violates a precondition yields a row with ``error``
    set; the other rows are unaffected. Row order does not depend on the
    number of worker threads.
    """
    corpus = corpus or default_corpus()
    points = list(product(a_values, alpha_values, sigma_values, delta_values, corpus.entries))
    threads = threads or default_threads()
    if threads == 1 or len(points) <= 1:
        return [_sweep_row(pt, corpus) for pt in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda pt: _sweep_row(pt, corpus), points))
