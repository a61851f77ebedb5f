"""Acceptance criteria 1-13, each at its stated tolerance and time budget.

Every criterion prints one ``criterion N PASS|FAIL`` line; the lines are
repeated in the pytest terminal summary. Run this file alone with

    pytest tests/test_acceptance.py -v
"""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from _oracles import BATTERY, gamma_ratio, kernel_series, phi as phi_ref, phi_tilde as phi_tilde_ref
from ka_laguerre import specfun
from ka_laguerre.fractional import (
    FractionalParams,
    gamma_monotonicity_check,
    gamma_monotonicity_margin,
    lemma42_residual,
    semigroup_subordination_residual,
)
from ka_laguerre.hardy import default_corpus, sweep, verify_nd
from ka_laguerre.laguerre import SpectralCoeffs, analyze, apply_operator_pointwise, eigenvalue, synthesize
from ka_laguerre.quadrature import Params, make_radial_rule
from ka_laguerre.semigroup import (
    ComponentIndex,
    apply_kernel,
    apply_spectral,
    boundary_identity_residual,
    hankel,
    infinitesimal_generator_residual,
    omega_radial,
    psi,
)
from ka_laguerre.spherical import (
    ReducedModel,
    apply_phi_semigroup,
    apply_semigroup,
    decompose,
    from_phi_coeffs,
    phi_function,
)
from ka_laguerre.transport import convolve, translate, translated_kernel_closed

GRID = np.linspace(0.2, 3.0, 5)
SAMPLES = np.linspace(0.2, 3.0, 8)
BAND_LIMITED = ("phi0", "phi3", "mixture")


def test_criterion_01_basis_integrity(criterion):
    c = criterion(1, "Gram matrix of phi_0..phi_20", 1e-8, 5)
    with c.timed():
        for a, alpha in BATTERY:
            rule = make_radial_rule(Params(a, alpha))
            basis = np.array([phi_tilde_ref(l, a, alpha, rule.nodes) for l in range(21)])
            gram = (basis * rule.weights) @ basis.T
            c.observe(np.max(np.abs(gram - np.eye(21))), f"(a,alpha)=({a},{alpha})")
    c.check()


def test_criterion_02_eigenrelation(criterion):
    c = criterion(2, "finite-difference L phi_l vs a(2l+alpha+1)", 1e-5, 5)
    with c.timed():
        for a, alpha in BATTERY:
            p = Params(a, alpha)
            rule = make_radial_rule(p)
            r = rule.nodes[(rule.nodes >= 0.1) & (rule.nodes <= rule.r_max / 2)]
            for l in range(11):
                f = lambda x, l=l: phi_tilde_ref(l, a, alpha, x)
                lam = a * (2 * l + alpha + 1)
                resid = np.abs(apply_operator_pointwise(f, p, r) - lam * f(r))
                c.observe(np.max(resid) / (lam * np.max(np.abs(f(r)))), f"({a},{alpha}) l={l}")
    c.check()


def test_criterion_03_translation_product_formula(criterion):
    c = criterion(3, "T_r phi_n(s) = n!/(alpha+1)_n phi_n(r) phi_n(s)", 1e-9, 10)
    with c.timed():
        for a, alpha in BATTERY:
            p = Params(a, alpha)
            for n in range(9):
                const = math.exp(math.lgamma(n + 1) + math.lgamma(alpha + 1) - math.lgamma(alpha + 1 + n))
                f = lambda x, n=n: phi_ref(n, a, alpha, x)
                for r in GRID:
                    got = translate(f, p, r, GRID)
                    c.observe(np.max(np.abs(got - const * f(r) * f(GRID))), f"({a},{alpha}) n={n} r={r}")
    c.check()


def test_criterion_04_convolution_orthogonality(criterion):
    c = criterion(4, "phi_n * phi_j = delta_nj phi_n (scaled)", 1e-8, 10)
    with c.timed():
        for a, alpha in BATTERY:
            p = Params(a, alpha)
            rule = make_radial_rule(p)
            const = 2 ** (alpha + 1) / (a ** alpha * math.gamma(alpha + 1))
            for n in range(6):
                for j in range(6):
                    fn = lambda x, n=n: phi_ref(n, a, alpha, x)
                    fj = lambda x, j=j: phi_ref(j, a, alpha, x)
                    for r in (0.5, 1.3, 2.4):
                        got = const * convolve(fn, fj, p, r, rule)
                        expect = fn(r) if n == j else 0.0
                        c.observe(abs(got - expect), f"({a},{alpha}) n={n} j={j} r={r}")
    c.check()


def test_criterion_05_kernel_closed_form(criterion):
    c = criterion(5, "closed translated kernel vs Hille-Hardy series", 1e-10, 5)
    triples = [(r, s, t) for t in (0.3, 0.7, 1.5) for r, s in
               ((0.3, 0.5), (1.0, 1.3), (2.0, 0.7), (1.6, 1.6), (0.5, 2.5), (2.2, 2.9), (1.1, 0.2))][:20]
    assert len(triples) == 20
    with c.timed():
        for a, alpha in BATTERY:
            p = Params(a, alpha)
            for r, s, t in triples:
                closed = translated_kernel_closed(p, r, s, t).to_complex().real
                series = kernel_series(a, alpha, r, s, t)
                c.observe(abs(closed / series - 1.0), f"({a},{alpha}) (r,s,t)=({r},{s},{t})")
    c.check()


def test_criterion_06_semigroup_dual_path(criterion):
    c = criterion(6, "semigroup spectral vs kernel path, composition", 1e-7, 10)
    corpus = default_corpus()
    with c.timed():
        for a, alpha in BATTERY:
            p = Params(a, alpha)
            for entry in corpus.entries:
                f = entry.build(p)
                coeffs = analyze(f, p, entry.L, support=entry.support)
                for t in (0.1, 0.5, 2.0):
                    spectral = synthesize(apply_spectral(coeffs, t), SAMPLES)
                    kernel = apply_kernel(f, p, t, SAMPLES, support=entry.support)
                    c.observe(np.max(np.abs(spectral - kernel)), f"({a},{alpha}) {entry.name} t={t}")
            coeffs = analyze(corpus.get("mixture").build(p), p)
            for z1, z2 in ((0.4, 0.4), (0.25 + 0.5j, 0.1 - 0.2j), (0.5j * math.pi, 0.5j * math.pi)):
                twice = apply_spectral(apply_spectral(coeffs, z1), z2).coeffs
                once = apply_spectral(coeffs, z1 + z2).coeffs
                c.require(np.max(np.abs(twice - once)) <= 1e-15 * max(1.0, np.max(np.abs(once))),
                          f"spectral composition at ({z1},{z2})")
            f = corpus.get("mixture").build(p)
            for z1, z2 in ((0.4, 0.4), (0.2, 0.7)):
                inner = lambda s, z1=z1: apply_kernel(f, p, z1, s)
                nested = apply_kernel(inner, p, z2, SAMPLES)
                c.observe(np.max(np.abs(nested - apply_kernel(f, p, z1 + z2, SAMPLES))),
                          f"({a},{alpha}) kernel composition ({z1},{z2})")
    c.check()


def test_criterion_07_boundary_identity(criterion):
    c = criterion(7, "Hankel boundary identity, eigenvalues (-1)^l, H^2 = I", 1e-7, 10)
    corpus = default_corpus()
    with c.timed():
        for a, alpha in BATTERY:
            p = Params(a, alpha)
            for name in BAND_LIMITED:
                coeffs = analyze(corpus.get(name).build(p), p, 8)
                c.observe(boundary_identity_residual(coeffs, SAMPLES), f"({a},{alpha}) {name}")
                twice = hankel(lambda s: hankel(coeffs, p, s), p, SAMPLES)
                resid = np.max(np.abs(twice - synthesize(coeffs, SAMPLES)))
                c.require(resid <= 1e-6, f"({a},{alpha}) {name} H^2 residual {resid:.2e}")
            for l in range(9):
                f = lambda s, l=l: phi_tilde_ref(l, a, alpha, s)
                c.observe(np.max(np.abs(hankel(f, p, SAMPLES) - (-1) ** l * f(SAMPLES))),
                          f"({a},{alpha}) eigenvalue l={l}")
    c.check()


def _component_grid():
    return [ComponentIndex(N, k, a, m) for N in (1, 2) for k in (0.0, 0.75) for a in (1.0, 2.0)
            for m in (0, 1, 2) if ComponentIndex.type_of(N, k, a, m) >= -0.5]


def test_criterion_08_component_semigroup(criterion):
    c = criterion(8, "Omega^(m) eigenaction, generator, Lambda kernel", 1e-7, 15)
    with c.timed():
        grid = _component_grid()
        c.require(len(grid) == 23, f"component grid has {len(grid)} entries")
        for ci in grid:
            label = f"(N,k,a,m)=({ci.N},{ci.k_sum},{ci.a},{ci.m})"
            for l in (0, 2, 5):
                f = lambda r, l=l: psi(l, ci, r)
                for z in (0.3, 0.7 + 0.5j, 0.5j * math.pi):
                    got = omega_radial(ci, f, z, SAMPLES)
                    expect = np.exp(-z * (2 * l + ci.lam + 1)) * f(SAMPLES)
                    resid = np.max(np.abs(got - expect))
                    c.require(resid <= 1e-8, f"{label} eigenaction l={l} z={z}: {resid:.2e}")
            for l in (0, 2):
                resid = infinitesimal_generator_residual(ci, lambda r, l=l: psi(l, ci, r), SAMPLES)
                c.require(resid <= 1e-4, f"{label} generator l={l}: {resid:.2e}")
            f = lambda r: psi(1, ci, r) - 0.5 * psi(3, ci, r) + r ** (ci.m + 2) * np.exp(-r ** ci.a / ci.a)
            for z in (0.1, 0.7, 2.0):
                spectral = omega_radial(ci, f, z, SAMPLES)
                kernel = omega_radial(ci, f, z, SAMPLES, method="kernel")
                c.observe(np.max(np.abs(spectral - kernel)), f"{label} Lambda kernel z={z}")
    c.check()


MODELS = (
    ReducedModel("Z2_line", 1.0, k=0.75),
    ReducedModel("Z2_line", 2.0, k=0.0),
    ReducedModel("PlaneFourier", 2.0, M_max=3),
    ReducedModel("PlaneFourier", 1.0, M_max=3),
)


def _phi_terms(model):
    terms = {(0, 0, 0): 1.0, (3, 0, 0): -0.4}
    for m, j in model.modes()[1:]:
        terms[(m + 1, m, j)] = 0.6 / (m + j + 1)
        terms[(0, m, j)] = 0.3
    return terms


def _points(model):
    if model.kind == "Z2_line":
        return (np.array([-2.1, -0.7, -0.3, 0.4, 1.2, 2.6]),)
    theta = np.linspace(0.1, 6.0, 6)
    radius = np.linspace(0.3, 2.5, 6)
    return radius * np.cos(theta), radius * np.sin(theta)


def test_criterion_09_spherical_assembly(criterion):
    c = criterion(9, "per-mode semigroup vs Phi-basis spectral form", 1e-8, 10)
    with c.timed():
        for model in MODELS:
            terms = _phi_terms(model)
            dec = from_phi_coeffs(terms, model, L=10)
            points = _points(model)
            for z in (0.0, 0.4, 0.3 + 1.0j, 0.5j * math.pi):
                assembled = apply_semigroup(dec, z)(*points)
                direct = sum(cf * phi_function(l, m, j, model, *points)
                             for (l, m, j), cf in apply_phi_semigroup(terms, model, z).items())
                c.observe(np.max(np.abs(assembled - direct)), f"{model.kind} a={model.a} z={z}")
            a = model.a
            if model.kind == "Z2_line":
                radial = lambda x: np.exp(-np.abs(x) ** a / a) * (1 + x * x)
            else:
                radial = lambda x, y: np.exp(-np.hypot(x, y) ** a / a) * (1 + x * x + y * y)
            out = apply_semigroup(decompose(radial, model), 0.5)
            leak = max(norm for (m, _), norm in out.mode_norms().items() if m >= 1)
            c.require(leak <= 1e-10, f"{model.kind} a={a} leakage {leak:.2e}")
    c.check()


def test_criterion_10_subordination(criterion):
    c = criterion(10, "Gamma integral identity grid and subordination", 1e-7, 10)
    corpus = default_corpus()
    with c.timed():
        for sigma in (0.1, 0.3, 0.5, 0.7, 0.9):
            for lam in (0.5, 1.0, 3.0, 7.5):
                c.observe(lemma42_residual(sigma, lam), f"sigma={sigma} lambda={lam}")
        for a, alpha in BATTERY:
            p = Params(a, alpha)
            for name in BAND_LIMITED:
                coeffs = analyze(corpus.get(name).build(p), p, 8)
                for sigma in (0.25, 0.5, 0.75):
                    resid = semigroup_subordination_residual(coeffs, sigma)
                    c.require(resid <= 1e-6, f"({a},{alpha}) {name} sigma={sigma}: {resid:.2e}")
    c.check()


def _monotonicity_triples():
    out = []
    for i in range(50):
        t = 0.05 + 0.37 * (i % 10)
        tau = t + 0.1 + 0.9 * (i % 7)
        v = 0.01 * 3.0 ** (i % 5)
        out.append((t, tau, v))
    return out


def test_criterion_11_gamma_monotonicity(criterion):
    c = criterion(11, "Gamma(t+v)/Gamma(tau+v) < Gamma(t)/Gamma(tau)", 1e-12, 1)
    with c.timed():
        triples = _monotonicity_triples()
        c.require(len(set(triples)) == 50, "triples not distinct")
        for t, tau, v in triples:
            margin = gamma_monotonicity_margin(t, tau, v)
            lhs, rhs = gamma_ratio(t + v, tau + v), gamma_ratio(t, tau)
            c.require(gamma_monotonicity_check(t, tau, v) and lhs < rhs, f"(t,tau,v)=({t},{tau},{v})")
            c.observe(abs(margin - (1 - lhs / rhs)), f"margin vs oracle at ({t},{tau},{v})")
            c.observe_margin(margin, f"({t},{tau},{v})")
    c.check()


def test_criterion_12_hardy_chains(criterion):
    c = criterion(12, "Hardy chains lhs <= mid <= rhs", 0.0, 30)
    with c.timed():
        rows = sweep((1.0, 2.0), (0.0, 1.0), (0.3, 0.7), (0.5, 2.0), default_corpus(), threads=1)
        c.require(len(rows) == 80, f"sweep produced {len(rows)} rows")
        for rep in rows:
            label = f"{rep.corpus} (a,alpha,sigma,delta)=({rep.a},{rep.alpha},{rep.sigma},{rep.delta})"
            c.require(rep.error is None and rep.passed, f"{label} failed")
            c.observe_margin(min(rep.margin_lhs_mid, rep.margin_mid_rhs), label)
        for model in MODELS:
            a = model.a
            if model.kind == "Z2_line":
                f = lambda x: np.exp(-np.abs(x) ** a / a) * (1.0 + x + 0.3 * x * x)
            else:
                f = lambda x, y: np.exp(-np.hypot(x, y) ** a / a) * (1.0 + x + 0.5 * x * y + 0.2 * y)
            hyp = 4 * model.k + 2 * model.N + a - 4
            c.require(hyp >= 0, f"{model.kind} violates the expansion hypothesis")
            for sigma, delta in ((0.3, 0.5), (0.7, 2.0)):
                rep = verify_nd(f, model, FractionalParams(sigma, delta), "mixed")
                label = f"{model.kind} a={a} sigma={sigma} delta={delta}"
                c.require(rep.passed, f"{label} failed")
                c.observe_margin(min(rep.margin_lhs_mid, rep.margin_mid_rhs), label)
    c.check()


def _run_identities(path, threads):
    env = dict(os.environ, KA_LAGUERRE_THREADS=str(threads))
    return subprocess.run([sys.executable, "-m", "ka_laguerre.cli", "identities", "--output", str(path)],
                          capture_output=True, text=True, env=env)


def test_criterion_13_cli_identities(criterion, tmp_path):
    c = criterion(13, "CLI identities exit 0, byte-identical reruns", 0.0, 60)
    with c.timed():
        outputs = []
        for i, threads in enumerate((1, 1, 3)):
            path = tmp_path / f"identities_{i}.csv"
            proc = _run_identities(path, threads)
            c.require(proc.returncode == 0, f"run {i} exit status {proc.returncode}: {proc.stderr.strip()}")
            outputs.append(path.read_bytes() if path.exists() else b"")
        c.require(outputs[0] == outputs[1], "reruns differ")
        c.require(outputs[0] == outputs[2], "output depends on thread count")
        lines = outputs[0].decode().splitlines()
        c.require(lines[0] == "check,params,residual,threshold,pass", "unexpected header")
        for line in lines[1:]:
            fields = line.split(",")
            c.require(fields[-1] == "true" and float(fields[2]) <= float(fields[3]), f"row {line}")
            c.observe_margin(float(fields[3]) - float(fields[2]), fields[0])
    c.check()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
