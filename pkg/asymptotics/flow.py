"""The flow Π_τ of X = r∇r/|∇r|² on an end

Since X·r = r, Π_τ maps S_{ρ₀} onto S_{τρ₀}. Ends with |∇r| ≡ 1 use that
closed form; graph ends integrate the flow in the graph coordinate, where
dρ/dt = r²/(ρ + uu′), and compare the result with τρ₀.
"""

import logging
import math
from dataclasses import dataclass

from scipy.integrate import solve_ivp

from errors import DomainError, NumericalFailure
from geometry.ends import WeaklyConicalEnd
from geometry.models import GraphEnd

logger = logging.getLogger(__name__)

FLOW_RTOL = 1e-12
FLOW_TOLERANCE = 1e-8
"""allowed |ρ(τ) − τρ₀|/τρ₀ of the integrated flow"""


@dataclass(frozen=True)
class FlowResult:
    rho0: float
    tau: float
    radius: float
    """r at the end of the flow"""
    integrated: bool
    relative_error: float
    """|radius − τρ₀|/τρ₀, zero for the closed form"""
    steps: int = 0


def flow_X(end: WeaklyConicalEnd, rho0: float, tau: float, tolerance: float = FLOW_TOLERANCE) -> FlowResult:
    """Image radius of S_{ρ₀} under the time ln τ flow of X"""
    if not tau >= 1.0:
        raise DomainError("Flow time needs τ ≥ 1", tau=tau)
    end.check_radius(rho0)
    target = tau * rho0
    if target > end.r_max * (1 + 1e-12):
        raise DomainError("Flow leaves the end", rho0=rho0, tau=tau, r_max=end.r_max)

    if tau == 1.0 or not isinstance(end.model, GraphEnd):
        return FlowResult(rho0=rho0, tau=tau, radius=target, integrated=False, relative_error=0.0)

    model = end.model
    profile = model.profile

    def rhs(_, y):
        rho = y[0]
        u, du, _ = profile.derivatives(rho)
        return [(rho * rho + u * u) / (rho + u * du)]

    start = model.rho_of(rho0)
    sol = solve_ivp(rhs, (0.0, math.log(tau)), [start], method="DOP853", rtol=FLOW_RTOL, atol=1e-14 * start)
    if not sol.success:
        raise NumericalFailure(f"Flow integration failed: {sol.message}", rho0=rho0, tau=tau)
    radius = model.r_of_rho(float(sol.y[0, -1]))
    error = abs(radius - target) / target
    result = FlowResult(rho0=rho0, tau=tau, radius=radius, integrated=True, relative_error=error, steps=len(sol.t) - 1)
    if error > tolerance:
        raise NumericalFailure("Integrated flow disagrees with X·r = r", rho0=rho0, tau=tau, radius=radius, best_estimate=target)
    logger.debug(f"Π_{tau:g}(S_{rho0:g}) = S_{radius:.12g} on {model.name} ({result.steps} steps, error {error:.1e})")
    return result
