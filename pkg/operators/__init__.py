"""Drift operators L_m / L⁺_m, almost-eigen certificates and transformations"""

from operators.context import (
    DriftOperator,
    EigenContext,
    OperatorSign,
    ResidualConvention,
    SeparatedFunction,
    separated,
)
from operators.drift import apply_operator, apply_scaled, radial_action, radial_action_scale
from operators.certificates import AlmostEigenCertificate, certify_almost_eigen, growth_exponent, residual_ratio
from operators.transforms import CompositionCheck, TransformKind, compose_check, transform, transformed_context

__all__ = [
    "AlmostEigenCertificate",
    "CompositionCheck",
    "DriftOperator",
    "EigenContext",
    "OperatorSign",
    "ResidualConvention",
    "SeparatedFunction",
    "TransformKind",
    "apply_operator",
    "apply_scaled",
    "certify_almost_eigen",
    "compose_check",
    "growth_exponent",
    "radial_action",
    "radial_action_scale",
    "residual_ratio",
    "separated",
    "transform",
    "transformed_context",
]
