"""Radial weights Φ_m(t) = t^m e^{-t²/4}, Ψ_m(t) = t^m e^{+t²/4} and plain powers t^m

All arithmetic happens on log-values; the direct value is exp(log_value) and
rounds to 0 or inf instead of raising.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from errors import DomainError


class WeightKind(str, Enum):
    GAUSSIAN = "gaussian"
    INVERSE_GAUSSIAN = "inverse_gaussian"
    POWER = "power"


@dataclass(frozen=True)
class WeightSpec:
    kind: WeightKind
    m: float

    @classmethod
    def gaussian(cls, m: float) -> "WeightSpec":
        return cls(WeightKind.GAUSSIAN, float(m))

    @classmethod
    def inverse_gaussian(cls, m: float) -> "WeightSpec":
        return cls(WeightKind.INVERSE_GAUSSIAN, float(m))

    @classmethod
    def power(cls, m: float) -> "WeightSpec":
        return cls(WeightKind.POWER, float(m))

    @property
    def quadratic_sign(self) -> int:
        """Coefficient sign of t²/4 in the log weight"""
        if self.kind is WeightKind.GAUSSIAN:
            return -1
        if self.kind is WeightKind.INVERSE_GAUSSIAN:
            return 1
        return 0

    def log_value(self, t: float) -> float:
        """m·ln t ∓ t²/4 for t > 0; t = 0 only when m ≥ 0"""
        if t < 0 or math.isnan(t):
            raise DomainError("Weight evaluated at a negative radius", radius=t)
        if t == 0:
            if self.m > 0:
                return -math.inf
            if self.m == 0:
                return 0.0
            raise DomainError("Weight with negative exponent is singular at the origin", m=self.m)
        return self.m * math.log(t) + self.quadratic_sign * t * t / 4.0

    def log_values(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0):
            raise DomainError("Weight evaluated at a non-positive radius", radius=float(np.min(t)))
        return self.m * np.log(t) + self.quadratic_sign * t * t / 4.0


def eval_weight(spec: WeightSpec, t: float) -> tuple[float, float]:
    """Return (value, log_value) of the weight at t > 0"""
    if not t > 0:
        raise DomainError("Weights are defined for t > 0 only", radius=t)
    log_value = spec.log_value(t)
    return safe_exp(log_value), log_value


def log_phi(m: float, t: float) -> float:
    """ln Φ_m(t)"""
    return m * math.log(t) - t * t / 4.0


def log_psi(m: float, t: float) -> float:
    """ln Ψ_m(t)"""
    return m * math.log(t) + t * t / 4.0


def safe_exp(x: float) -> float:
    if x > 709.78:
        return math.inf
    if x < -745.2:
        return 0.0
    return math.exp(x)
