"""Exceptions and argument checks shared by the numerical modules."""

import math
import numbers

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class QuadratureError(RuntimeError):
    """A quadrature rule could not be built or an integral did not converge."""


class EvaluationError(ArithmeticError):
    """An integrand produced a non-finite value."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


def check_real(name, value, low=None, high=None, low_open=False,
               high_open=False):
    """Return ``value`` as float after checking it lies in the given range."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise DomainError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    if low is not None:
        if value < low or (low_open and value == low):
            op = ">" if low_open else ">="
            raise DomainError(f"{name} must be {op} {low}, got {value}")
    if high is not None:
        if value > high or (high_open and value == high):
            op = "<" if high_open else "<="
            raise DomainError(f"{name} must be {op} {high}, got {value}")
    return value


def check_int(name, value, low=0):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < low:
        raise DomainError(f"{name} must be >= {low}, got {value}")
    return value


def check_finite(name, values):
    values = np.asarray(values)
    bad = ~np.isfinite(values)
    if bad.any():
        idx = int(np.flatnonzero(bad.ravel())[0])
        raise EvaluationError(f"{name} is not finite at index {idx}", index=idx)
    return values
