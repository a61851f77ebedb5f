"""Numerics for the a-deformed Laguerre operator: translation, convolution,
holomorphic semigroups, Hankel transforms, fractional powers and Hardy
inequality checks."""

from ._validation import DomainError, EvaluationError, QuadratureError
from .fractional import (
    FractionalParams,
    apply_modified_fractional,
    apply_pure_fractional,
    hardy_constant_B,
    hardy_weight_omega,
    lemma42_residual,
    multiplier_S,
)
from .hardy import HardyReport, TestCorpus, default_corpus, sweep, verify_1d, verify_nd
from .laguerre import (
    HolomorphicTime,
    SpectralCoeffs,
    analyze,
    apply_operator_pointwise,
    apply_operator_spectral,
    eigenvalue,
    phi,
    phi_tilde,
    synthesize,
)
from .quadrature import Params, RadialRule, ThetaRule, make_radial_rule, make_theta_rule
from .semigroup import (
    ComponentIndex,
    apply_kernel,
    apply_spectral,
    boundary_identity_residual,
    hankel,
    omega_radial,
)
from .spherical import ModeDecomposition, ReducedModel, apply_semigroup, decompose, generalized_fourier
from .transport import convolve, kernel_q, translate, translated_kernel_closed

__version__ = "0.1.0"
