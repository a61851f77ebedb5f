"""Spherical-component assembly of the N-dimensional semigroup and the
(k,a)-generalized Fourier transform in two reduced models.

``Z2_line``: N = 1, reflection group Z_2, weight |x|^(2k); the sphere is
{-1, 1} and the modes are m = 0 (even) and m = 1 (odd).

``PlaneFourier``: N = 2, k = 0; modes are Fourier modes m = 0..M_max with
real cosine/sine pairs.

A function is stored per mode (m, j) through the coefficients of
g_{m,j} = r^{-m} f_{m,j} in the basis of type lambda_{k,a,m}, so that
f_{m,j}(r) = r^m g_{m,j}(r) and the mode norms add up to the weighted
L^2 norm of f.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import DomainError, check_int, check_real
from .laguerre import DEFAULT_DEGREE, SpectralCoeffs, analyze, as_time, phi_tilde_matrix, synthesize
from .semigroup import ComponentIndex, hankel, hankel_spectral, omega_radial_coeffs

__all__ = [
    "ReducedModel",
    "ModeDecomposition",
    "decompose",
    "radial_projection",
    "from_phi_coeffs",
    "phi_function",
    "apply_semigroup",
    "apply_phi_semigroup",
    "generalized_fourier",
]

Z2_LINE = "Z2_line"
PLANE_FOURIER = "PlaneFourier"


@dataclass(frozen=True)
class ReducedModel:
    """One of the two shipped models with its deformation ``a``.

    ``k`` is the Z_2 multiplicity (must be 0 for the plane) and ``M_max``
    the highest Fourier mode kept in the plane (ignored on the line).
    """

    kind: str
    a: float
    k: float = 0.0
    M_max: int = 4

    def __post_init__(self):
        if self.kind not in (Z2_LINE, PLANE_FOURIER):
            raise DomainError(f"unknown model kind {self.kind!r}")
        object.__setattr__(self, "a", check_real("a", self.a, 0.0, low_open=True))
        object.__setattr__(self, "k", check_real("k", self.k, 0.0))
        object.__setattr__(self, "M_max", check_int("M_max", self.M_max))
        if self.kind == PLANE_FOURIER and self.k != 0:
            raise DomainError("the plane model has k = 0")
        if self.kind == Z2_LINE:
            object.__setattr__(self, "M_max", 1)
        hyp = 4.0 * self.k + 2.0 * self.N + self.a - 4.0
        if hyp < 0:
            raise DomainError(f"expansion hypothesis 4<k> + 2N + a - 4 >= 0 fails ({hyp})")
        for m in range(self.M_max + 1):
            self.component(m)

    @property
    def N(self):
        return 1 if self.kind == Z2_LINE else 2

    def component(self, m):
        return ComponentIndex(self.N, self.k, self.a, m)

    @property
    def lam_a(self):
        return self.component(0).lam

    def modes(self):
        """Mode labels (m, j) in their fixed assembly order."""
        if self.kind == Z2_LINE:
            return [(0, 0), (1, 0)]
        out = [(0, 0)]
        for m in range(1, self.M_max + 1):
            out += [(m, 0), (m, 1)]
        return out

    def angular(self, m, j, x):
        """Y_{m,j} at the unit vector(s) ``x``: sign on the line, angle in the plane."""
        if self.kind == Z2_LINE:
            x = np.asarray(x, dtype=float)
            return (np.ones_like(x) if m == 0 else np.sign(x)) / math.sqrt(2.0)
        theta = np.asarray(x, dtype=float)
        if m == 0:
            return np.full_like(theta, 1.0 / math.sqrt(2.0 * math.pi))
        trig = np.cos if j == 0 else np.sin
        return trig(m * theta) / math.sqrt(math.pi)

    def sphere_rule(self):
        """Points and weights of the angular integral (exact on the line)."""
        if self.kind == Z2_LINE:
            return np.array([1.0, -1.0]), np.array([1.0, 1.0])
        n = max(4 * self.M_max, 4)
        theta = 2.0 * math.pi * np.arange(n) / n
        return theta, np.full(n, 2.0 * math.pi / n)

    def to_cartesian(self, r, x):
        """Point r x' of the model space for radius r and sphere point x'."""
        if self.kind == Z2_LINE:
            return (r * x,)
        return (r * np.cos(x), r * np.sin(x))

    def to_polar(self, *coords):
        if self.kind == Z2_LINE:
            (x,) = coords
            x = np.asarray(x, dtype=float)
            return np.abs(x), np.sign(x)
        x, y = (np.asarray(c, dtype=float) for c in coords)
        return np.hypot(x, y), np.arctan2(y, x)


@dataclass(frozen=True, eq=False)
class ModeDecomposition:
    """Per-mode coefficients of g_{m,j} = r^{-m} f_{m,j}."""

    model: ReducedModel
    coeffs: dict = field(default_factory=dict)

    def radial_part(self, m, j):
        c = self.coeffs[(m, j)]
        return lambda r: np.power(r, m) * synthesize(c, r)

    def norm(self):
        """Weighted L^2 norm, assembled from the mode norms in mode order."""
        total = 0.0
        for key in self.model.modes():
            if key in self.coeffs:
                total += self.coeffs[key].norm() ** 2
        return math.sqrt(total)

    def mode_norms(self):
        return {key: self.coeffs[key].norm() for key in self.model.modes() if key in self.coeffs}

    def map_modes(self, fn):
        """New decomposition with ``fn(component, coeffs)`` applied per mode."""
        out = {}
        for key in self.model.modes():
            if key in self.coeffs:
                out[key] = fn(self.model.component(key[0]), self.coeffs[key])
        return ModeDecomposition(self.model, out)

    def __call__(self, *coords):
        """Evaluate the assembled function at Cartesian points."""
        r, x = self.model.to_polar(*coords)
        total = None
        for key in self.model.modes():
            if key not in self.coeffs:
                continue
            m, j = key
            term = self.model.angular(m, j, x) * np.power(r, m) * synthesize(self.coeffs[key], r)
            total = term if total is None else total + term
        return total


def radial_projection(f, model, m, j):
    """g_{m,j}(r) = r^{-m} f_{m,j}(r) with f_{m,j} the angular projection of f."""
    points, weights = model.sphere_rule()
    y = model.angular(m, j, points) * weights

    def g(r):
        r = np.asarray(r, dtype=float)
        vals = np.asarray(f(*model.to_cartesian(r[..., None], points)))
        return (vals @ y) * np.power(r, -float(m))

    return g


def decompose(f, model, L=DEFAULT_DEGREE, rules=None):
    """Angular projections f_{m,j}(r) and their expansions in the lambda_m basis.

    ``f`` takes Cartesian coordinate arrays (one on the line, two in the
    plane). ``rules`` optionally maps m to a radial rule at (a, lambda_m).
    """
    rules = rules or {}
    out = {}
    for key in model.modes():
        m, j = key
        p = model.component(m).params
        out[key] = analyze(radial_projection(f, model, m, j), p, L, rules.get(m))
    return ModeDecomposition(model, out)


def from_phi_coeffs(terms, model, L=DEFAULT_DEGREE):
    """Decomposition of sum c Phi_{l,m,j} from {(l, m, j): c}."""
    out = {}
    for key in model.modes():
        m, j = key
        c = np.zeros(L + 1, dtype=complex if any(isinstance(v, complex) for v in terms.values()) else float)
        for (l, mm, jj), v in terms.items():
            if (mm, jj) == key:
                c[l] += v
        out[key] = SpectralCoeffs(model.component(m).params, c)
    for l, m, j in terms:
        if (m, j) not in out:
            raise DomainError(f"mode {(m, j)} not in the model")
    return ModeDecomposition(model, out)


def phi_function(l, m, j, model, *coords):
    """Phi_{l,m,j}(x) = Y_{m,j}(x') psi_{l,m}(|x|), evaluated directly."""
    r, x = model.to_polar(*coords)
    p = model.component(m).params
    return model.angular(m, j, x) * np.power(r, m) * phi_tilde_matrix(l, p, r)[l]


def apply_semigroup(dec, z):
    """I_{k,a}(z) mode by mode through the radial parts Omega^(m)(gamma_z)."""
    as_time(z)
    return dec.map_modes(lambda ci, g: omega_radial_coeffs(ci, g, z))


def apply_phi_semigroup(terms, model, z):
    """Direct expansion in Phi_{l,m,j}: multiply c by e^{-z(2l+lambda_m+1)}."""
    z = as_time(z).z
    out = {}
    for (l, m, j), c in terms.items():
        lam = model.component(m).lam
        out[(l, m, j)] = c * cmath.exp(-z * (2.0 * l + lam + 1.0))
    return out


def generalized_fourier(dec, method="spectral"):
    """F_{k,a} f = sum e^{-i pi m/a} Y_{m,j} r^m H_{a,lambda_m}(r^{-m} f_{m,j}).

    ``method='quadrature'`` evaluates each Hankel transform by its defining
    integral and re-expands the result; the default uses the boundary value
    of the semigroup on the band-limited coefficients.
    """
    if method not in ("spectral", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    a = dec.model.a

    def per_mode(ci, g):
        phase = cmath.exp(-1j * math.pi * ci.m / a)
        if method == "spectral":
            h = hankel_spectral(g)
        else:
            h = analyze(lambda r: hankel(g, g.params, r), g.params, g.L)
        return h.with_coeffs(phase * h.coeffs)

    return dec.map_modes(per_mode)
