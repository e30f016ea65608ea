"""Frequency functionals, their identities and the tail estimates they imply"""

from frequency.functionals import (
    BoundaryQuantities,
    BulkQuantities,
    RadialDensity,
    boundary_quantities,
    bulk_quantities,
    check_integrable,
    sphere_l2,
)
from frequency.trace import (
    TRACE_CSV_HEADER,
    FrequencyTrace,
    TraceRow,
    XiEstimate,
    extract_xi,
    frequency_grid,
    frequency_trace,
    nhat_bound_radius,
    vanishing_radius,
)
from frequency.identities import IdentityReport, IdentityResidual, check_identities
from frequency.tails import BoundaryTrace, InequalityCheck, InequalityPoint, TailEstimate, boundary_trace, tail_estimate
from frequency.weighted_decay import StrongDecayCheck, flux_monotonicity, psi_poincare, strong_decay, twisted_tail_estimate
from frequency.inequalities import (
    InequalityParameters,
    TailEstimateReport,
    harnack_check,
    poincare_check,
    small_drift_check,
    verify_inequalities,
)

__all__ = [
    "TRACE_CSV_HEADER",
    "BoundaryQuantities",
    "BoundaryTrace",
    "BulkQuantities",
    "FrequencyTrace",
    "IdentityReport",
    "IdentityResidual",
    "InequalityCheck",
    "InequalityParameters",
    "InequalityPoint",
    "RadialDensity",
    "StrongDecayCheck",
    "TailEstimate",
    "TailEstimateReport",
    "TraceRow",
    "XiEstimate",
    "boundary_quantities",
    "boundary_trace",
    "bulk_quantities",
    "check_identities",
    "check_integrable",
    "extract_xi",
    "flux_monotonicity",
    "frequency_grid",
    "frequency_trace",
    "harnack_check",
    "nhat_bound_radius",
    "poincare_check",
    "psi_poincare",
    "small_drift_check",
    "sphere_l2",
    "strong_decay",
    "tail_estimate",
    "twisted_tail_estimate",
    "vanishing_radius",
]
