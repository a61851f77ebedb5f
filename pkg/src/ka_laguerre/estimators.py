"""scikit-learn style transformers over the spectral calculus.

``LaguerreExpansion`` maps rows of function samples, taken at its radial
rule nodes, to coefficient rows; the other transformers act on coefficient
rows by a diagonal multiplier, so they chain in a Pipeline:

    pipe = make_pipeline(LaguerreExpansion(a=1, alpha=0), HolomorphicSemigroup(a=1, alpha=0, z=0.5))
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .fractional import modified_multiplier
from .laguerre import as_time, phi_tilde_matrix
from .quadrature import Params, make_radial_rule
from .semigroup import _boundary_phase

__all__ = ["LaguerreExpansion", "HolomorphicSemigroup", "HankelTransform", "ModifiedFractionalPower"]


class LaguerreExpansion(BaseEstimator, TransformerMixin):
    """Samples at the rule nodes -> coefficients c_0..c_degree, and back."""

    def __init__(self, a=1.0, alpha=0.0, degree=40, n_nodes=128):
        self.a = a
        self.alpha = alpha
        self.degree = degree
        self.n_nodes = n_nodes

    def fit(self, X=None, y=None):
        params = Params(self.a, self.alpha)
        rule = make_radial_rule(params, self.n_nodes)
        self.params_ = params
        self.nodes_ = np.array(rule.nodes)
        self.weights_ = np.array(rule.weights)
        self.basis_ = phi_tilde_matrix(self.degree, params, rule.nodes)
        if X is not None:
            self._check_samples(X)
        return self

    def _check_samples(self, X):
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != len(self.nodes_):
            raise ValueError(f"expected {len(self.nodes_)} samples per row (one per node), got {X.shape[1]}")
        return X

    def transform(self, X):
        check_is_fitted(self, "basis_")
        X = self._check_samples(X)
        return (X * self.weights_) @ self.basis_.T

    def inverse_transform(self, C):
        check_is_fitted(self, "basis_")
        C = _check_coeffs(C)
        if C.shape[1] != self.degree + 1:
            raise ValueError(f"expected {self.degree + 1} coefficients per row, got {C.shape[1]}")
        return C @ self.basis_


def _check_coeffs(C):
    """check_array for coefficient rows, which may be complex."""
    arr = np.asarray(C)
    if not np.iscomplexobj(arr):
        return check_array(C, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d coefficient array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coefficients contain NaN or infinity")
    return arr


class _DiagonalMultiplier(BaseEstimator, TransformerMixin):
    """Shared fit/transform for operators diagonal in the basis."""

    def _multiplier(self, l):
        raise NotImplementedError

    def fit(self, C=None, y=None):
        self.params_ = Params(self.a, self.alpha)
        if C is not None:
            self.n_coeffs_ = _check_coeffs(C).shape[1]
        return self

    def transform(self, C):
        check_is_fitted(self, "params_")
        C = _check_coeffs(C)
        return C * self._multiplier(np.arange(C.shape[1]))

    def inverse_transform(self, C):
        check_is_fitted(self, "params_")
        C = _check_coeffs(C)
        return C / self._multiplier(np.arange(C.shape[1]))


class HolomorphicSemigroup(_DiagonalMultiplier):
    """Coefficients times e^{-z(2l+alpha+1)}, Re z >= 0."""

    def __init__(self, a=1.0, alpha=0.0, z=0.5):
        self.a = a
        self.alpha = alpha
        self.z = z

    def _multiplier(self, l):
        z = as_time(self.z).z
        mult = np.exp(-z * (2.0 * l + self.alpha + 1.0))
        return mult.real if z.imag == 0 else mult


class HankelTransform(_DiagonalMultiplier):
    """The a-deformed Hankel transform on coefficients: (-1)^l, via the boundary semigroup."""

    def __init__(self, a=1.0, alpha=0.0):
        self.a = a
        self.alpha = alpha

    def _multiplier(self, l):
        mult = _boundary_phase(self.alpha) * np.exp(-0.5j * np.pi * (2.0 * l + self.alpha + 1.0))
        return mult.real


class ModifiedFractionalPower(_DiagonalMultiplier):
    """Coefficients times (2a)^sigma S_l."""

    def __init__(self, a=1.0, alpha=0.0, sigma=0.5):
        self.a = a
        self.alpha = alpha
        self.sigma = sigma

    def _multiplier(self, l):
        return modified_multiplier(l, self.params_, self.sigma)
