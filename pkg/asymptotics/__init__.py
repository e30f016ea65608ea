"""Flow of X, rescaled link metrics, traces at infinity and homogeneity bounds"""

from asymptotics.flow import FlowResult, flow_X
from asymptotics.cone import CONVERGENCE_CSV_HEADER, AsymptoticCone, LinkMetricRow, link_metric, link_scale
from asymptotics.homogeneity import (
    HomogeneityBound,
    HomogeneityPoint,
    TraceAtInfinity,
    hypothesis_integral,
    measured_degree,
    trace_at_infinity,
    verify_homogeneity_bound,
)

__all__ = [
    "CONVERGENCE_CSV_HEADER",
    "AsymptoticCone",
    "FlowResult",
    "HomogeneityBound",
    "HomogeneityPoint",
    "LinkMetricRow",
    "TraceAtInfinity",
    "flow_X",
    "hypothesis_integral",
    "link_metric",
    "link_scale",
    "measured_degree",
    "trace_at_infinity",
    "verify_homogeneity_bound",
]
