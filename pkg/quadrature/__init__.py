"""Overflow-safe weights and weighted radial quadrature"""

from quadrature.integrate import (
    DEFAULT_QUADRATURE,
    LogScaled,
    PartsIdentityCheck,
    QuadratureSpec,
    WeightedIntegral,
    check_parts_identity,
    integrate_radial,
    tail_ratio,
)
from quadrature.weights import WeightKind, WeightSpec, eval_weight, log_phi, log_psi, safe_exp

__all__ = [
    "DEFAULT_QUADRATURE",
    "LogScaled",
    "PartsIdentityCheck",
    "QuadratureSpec",
    "WeightKind",
    "WeightSpec",
    "WeightedIntegral",
    "check_parts_identity",
    "eval_weight",
    "integrate_radial",
    "log_phi",
    "log_psi",
    "safe_exp",
    "tail_ratio",
]
