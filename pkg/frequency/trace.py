"""Frequency traces on geometric ρ grids and the limit ξ = lim ρ²N̂_m"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from errors import DomainError, NumericalFailure, PreconditionError
from frequency.functionals import boundary_quantities, bulk_quantities, log_weight_at
from operators.certificates import growth_exponent
from operators.context import DriftOperator, OperatorSign, SeparatedFunction
from quadrature.integrate import DEFAULT_QUADRATURE, LogScaled, QuadratureSpec
from solvers.fitting import richardson_limit

logger = logging.getLogger(__name__)

TRACE_CSV_HEADER = ["rho", "B", "F", "D_hat", "L_hat", "N", "N_hat", "Xi"]
GRID_RATIO = 1.05
GRID_SPAN = 8.0
TRIVIAL_RATIO = 1e-30
MIN_XI_SPAN = 4.0
XI_FIT_TOLERANCE = 1e-3


@dataclass(frozen=True)
class TraceRow:
    """One radius; b, f in units of e^{log_ref}, d_hat, l_hat in units of w(ρ)·e^{log_ref}"""

    rho: float
    log_ref: float
    log_weight: float
    b: float
    f: float
    d_hat: float
    l_hat: float

    @property
    def N(self) -> float:
        return self.rho * self.f / self.b if self.b > 0 else math.nan

    @property
    def N_hat(self) -> float:
        return self.rho * self.d_hat / self.b if self.b > 0 else math.nan

    @property
    def Xi(self) -> float:
        return self.rho * self.N_hat

    @property
    def B(self) -> LogScaled:
        return LogScaled(self.b, self.log_ref)

    @property
    def B_hat(self) -> LogScaled:
        return LogScaled(self.b, self.log_ref + self.log_weight)

    @property
    def F_hat(self) -> LogScaled:
        return LogScaled(self.f, self.log_ref + self.log_weight)

    @property
    def D_hat(self) -> LogScaled:
        return LogScaled(self.d_hat, self.log_ref + self.log_weight)


@dataclass(frozen=True)
class FrequencyTrace:
    label: str
    operator: DriftOperator
    rows: tuple[TraceRow, ...]
    trivial: bool = False
    trivial_from: float | None = None
    """first radius where B fell below the triviality threshold"""

    @property
    def rho(self) -> np.ndarray:
        return np.array([row.rho for row in self.rows])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(row, name) for row in self.rows], dtype=float)

    def export_csv(self, path: str | Path) -> Path:
        """D_hat and L_hat are written as D̂/w(ρ) and L̂/w(ρ) so they stay in floating range"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(TRACE_CSV_HEADER)
            for row in self.rows:
                scale = LogScaled(1.0, row.log_ref).value
                writer.writerow(
                    [repr(row.rho)]
                    + [repr(x) for x in (row.b * scale, row.f * scale, row.d_hat * scale, row.l_hat * scale, row.N, row.N_hat, row.Xi)]
                )
        logger.debug(f"Trace of {self.label} exported to {path}")
        return path


def frequency_grid(r_start: float, r_stop: float | None = None, ratio: float = GRID_RATIO) -> np.ndarray:
    """Geometric grid with the given ratio, r_stop = 8·r_start by default"""
    if r_start <= 0:
        raise DomainError("Grid must start at a positive radius", r_start=r_start)
    r_stop = GRID_SPAN * r_start if r_stop is None else r_stop
    if r_stop <= r_start or ratio <= 1:
        raise DomainError("Grid needs r_stop > r_start and ratio > 1", r_start=r_start, r_stop=r_stop, ratio=ratio)
    count = int(math.ceil(math.log(r_stop / r_start) / math.log(ratio))) + 1
    return np.geomspace(r_start, r_stop, count)


def trace_row(u: SeparatedFunction, op: DriftOperator, rho: float, q: QuadratureSpec = DEFAULT_QUADRATURE) -> TraceRow:
    boundary = boundary_quantities(u, rho)
    bulk = bulk_quantities(u, op.m, rho, op.sign, q)
    log_weight = log_weight_at(op, rho)
    ref = boundary.log_scale + log_weight
    return TraceRow(
        rho=rho,
        log_ref=boundary.log_scale,
        log_weight=log_weight,
        b=boundary.b,
        f=boundary.f,
        d_hat=bulk.d_hat.relative_to(ref),
        l_hat=bulk.l_hat.relative_to(ref),
    )


def frequency_trace(
    u: SeparatedFunction,
    m: float,
    grid: Sequence[float] | None = None,
    sign: OperatorSign | str = OperatorSign.MINUS,
    q: QuadratureSpec = DEFAULT_QUADRATURE,
) -> FrequencyTrace:
    """B, F, D̂, L̂ and the frequencies on the grid

    A radius where B < 10⁻³⁰·max B is a triviality verdict: u must then
    also carry no energy beyond it, otherwise the end is not the one the
    triviality lemma describes and PreconditionError is raised.
    """
    op = DriftOperator(OperatorSign(sign), m)
    radii = frequency_grid(u.end.r_inner) if grid is None else np.asarray(grid, dtype=float)
    rows = [trace_row(u, op, float(rho), q) for rho in radii]

    log_b = np.array([row.B.log_abs() for row in rows])
    log_max = float(np.max(log_b))
    threshold = log_max + math.log(TRIVIAL_RATIO) if math.isfinite(log_max) else math.inf
    small = np.flatnonzero(log_b < threshold)
    trivial_from = None
    if small.size:
        first = rows[int(small[0])]
        energy_log = first.D_hat.log_abs()
        if math.isfinite(energy_log) and energy_log - first.log_weight >= threshold:
            raise PreconditionError(
                f"{u.label} vanishes on S_ρ but not beyond it",
                rho=first.rho,
                log_B=float(log_b[small[0]]),
                log_D_hat=energy_log,
            )
        trivial_from = first.rho
        logger.info(f"{u.label}: B vanishes from ρ={first.rho:g}, trace is trivial")

    trace = FrequencyTrace(label=u.label, operator=op, rows=tuple(rows), trivial=trivial_from is not None, trivial_from=trivial_from)
    logger.debug(f"Trace of {u.label} under {op.label}: {len(rows)} radii on [{radii[0]:g}, {radii[-1]:g}]")
    return trace


@dataclass(frozen=True)
class XiEstimate:
    xi_hat: float
    correction_exponent: float | None
    """log-log slope of |Ξ − ξ̂|; None when Ξ is constant to rounding"""
    residual: float
    trend: float
    """log-log slope of Ξ on the upper half of the grid"""
    window: tuple[float, float]
    coefficients: tuple[float, ...]


def extract_xi(trace: FrequencyTrace, min_span: float = MIN_XI_SPAN, tolerance: float = XI_FIT_TOLERANCE) -> XiEstimate:
    """Richardson extrapolation Ξ(ρ) ≈ ξ + c₁ρ^{-2} + c₂ρ^{-4}"""
    if trace.trivial:
        return XiEstimate(0.0, None, 0.0, 0.0, (trace.rows[0].rho, trace.rows[-1].rho), ())
    rho = trace.rho
    xi = trace.column("Xi")
    keep = np.isfinite(xi)
    rho, xi = rho[keep], xi[keep]
    if rho.size < 6 or rho[-1] / rho[0] < min_span:
        raise DomainError(f"Ξ extraction needs a grid spanning a factor {min_span:g}", window=(float(rho[0]), float(rho[-1])) if rho.size else None)

    limit, coef, residual = richardson_limit(rho, xi)
    trend = growth_exponent(rho, np.abs(xi))
    scale = max(1.0, abs(limit))
    if residual > tolerance * scale or limit < -tolerance * scale:
        raise NumericalFailure(
            f"ρ²N̂ of {trace.label} does not converge",
            best_estimate=limit,
            fit_residual=residual,
            trend=trend,
        )

    deviation = np.abs(xi - limit)
    significant = deviation > 1e-9 * scale
    exponent = None
    if np.count_nonzero(significant) >= 3:
        exponent = float(np.polyfit(np.log(rho[significant]), np.log(deviation[significant]), 1)[0])
    logger.debug(f"ξ̂[{trace.label}] = {limit:.8g}, correction exponent {exponent}, rms {residual:.2e}")
    return XiEstimate(
        xi_hat=limit,
        correction_exponent=exponent,
        residual=residual,
        trend=trend,
        window=(float(rho[0]), float(rho[-1])),
        coefficients=tuple(float(c) for c in coef),
    )


def vanishing_radius(trace: FrequencyTrace, tol: float = 1e-2) -> float | None:
    """First grid radius from which max(|N|, N̂) stays below tol"""
    radius = None
    for row in reversed(trace.rows):
        if not max(abs(row.N), row.N_hat) < tol:
            break
        radius = row.rho
    return radius


def nhat_bound_radius(trace: FrequencyTrace, xi_hat: float) -> float | None:
    """First grid radius from which N̂ ≤ ρ^{-2}·max(2ξ̂, 1)"""
    bound = max(2.0 * xi_hat, 1.0)
    radius = None
    for row in reversed(trace.rows):
        if not row.N_hat <= bound / row.rho**2:
            break
        radius = row.rho
    return radius
