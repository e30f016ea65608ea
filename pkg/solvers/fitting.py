"""Exponent fits log|v| ≈ βρ² + α ln ρ + c"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from errors import DomainError, NumericalFailure
from solvers.profiles import RadialProfile

logger = logging.getLogger(__name__)

MIN_WINDOW = 4.0
RATE_TOLERANCE = 0.02


@dataclass(frozen=True)
class ModeRate:
    alpha: float
    """power exponent"""
    beta: float
    """Gaussian exponent, one of −1/4, 0, +1/4"""


@dataclass(frozen=True)
class RateFit:
    alpha_hat: float
    beta_hat: float
    expected: ModeRate | None
    residual: float
    """RMS residual of the log fit"""
    window: tuple[float, float]
    samples: int
    nuisance: tuple[float, ...]
    """fitted ρ^{-2k} coefficients"""
    alpha_error: float | None = None
    beta_error: float | None = None
    passed: bool | None = None


def decaying_mode_rate(
    source: RadialProfile | tuple[Sequence[float], Sequence[float]],
    expected: ModeRate | tuple[float, float] | None = None,
    window: tuple[float, float] = (8.0, 14.0),
    samples: int = 200,
    nuisance_terms: int = 3,
    tolerance: float = RATE_TOLERANCE,
) -> RateFit:
    """Unweighted least squares of log|v| on [ρ_a, ρ_b]

    The design has columns ρ², ln ρ, 1 and up to three corrections ρ^{-2},
    ρ^{-4}, ρ^{-6} for the (1 + c₁ρ^{-2} + …) factor of the asymptotic series.
    Pass thresholds: |α̂ − α| ≤ tol·max(|α|, 1), |β̂ − β| ≤ tol·max(|β|, ¼).
    """
    lo, hi = window
    if hi < lo + MIN_WINDOW:
        raise DomainError(f"Fit window must be at least {MIN_WINDOW:g} long", window=window)
    if not 0 <= nuisance_terms <= 3:
        raise DomainError("Between 0 and 3 nuisance terms are supported", nuisance_terms=nuisance_terms)

    if isinstance(source, RadialProfile):
        rho = np.linspace(lo, hi, samples)
        signs = np.array([source.sign(float(x)) for x in rho])
        logs = np.array([source.log_abs(float(x)) for x in rho])
    else:
        rho = np.asarray(source[0], dtype=float)
        values = np.asarray(source[1], dtype=float)
        keep = (rho >= lo) & (rho <= hi)
        rho, values = rho[keep], values[keep]
        signs = np.sign(values)
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(values))
    if rho.size < 5 + nuisance_terms:
        raise DomainError("Too few samples in the fit window", samples=int(rho.size))

    if np.any(signs == 0) or np.any(signs != signs[0]):
        first = float(rho[np.argmax(signs != signs[0])]) if np.any(signs != signs[0]) else float(rho[np.argmax(signs == 0)])
        raise NumericalFailure("Mode changes sign in the fit window (oscillating solution)", radius=first, window=window)

    columns = [rho**2, np.log(rho), np.ones_like(rho)]
    columns += [rho ** (-2.0 * (j + 1)) for j in range(nuisance_terms)]
    design = np.column_stack(columns)
    coef = _lstsq(design, logs)
    residual = float(np.sqrt(np.mean((design @ coef - logs) ** 2)))
    beta_hat, alpha_hat = float(coef[0]), float(coef[1])

    fit = RateFit(
        alpha_hat=alpha_hat,
        beta_hat=beta_hat,
        expected=None,
        residual=residual,
        window=(lo, hi),
        samples=int(rho.size),
        nuisance=tuple(float(c) for c in coef[3:]),
    )
    if expected is not None:
        if not isinstance(expected, ModeRate):
            expected = ModeRate(*expected)
        alpha_error = abs(alpha_hat - expected.alpha)
        beta_error = abs(beta_hat - expected.beta)
        passed = alpha_error <= tolerance * max(abs(expected.alpha), 1.0) and beta_error <= tolerance * max(abs(expected.beta), 0.25)
        fit = replace(fit, expected=expected, alpha_error=alpha_error, beta_error=beta_error, passed=passed)

    logger.debug(f"Rate fit on [{lo:g}, {hi:g}]: α̂={alpha_hat:.5f}, β̂={beta_hat:.5f}, rms={residual:.2e}")
    return fit


def richardson_limit(x: Sequence[float], y: Sequence[float], powers: Sequence[float] = (0.0, -2.0, -4.0)) -> tuple[float, np.ndarray, float]:
    """Fit y ≈ Σ c_j x^{p_j}; returns (c for p = 0, all coefficients, RMS residual)"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    design = np.column_stack([x**p for p in powers])
    coef = _lstsq(design, y)
    residual = float(np.sqrt(np.mean((design @ coef - y) ** 2)))
    limit = float(coef[list(powers).index(0.0)]) if 0.0 in powers else math.nan
    return limit, coef, residual


def _lstsq(design: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Least squares with unit-max columns; the ρ^{-2k} columns span many decades"""
    norms = np.max(np.abs(design), axis=0)
    norms[norms == 0] = 1.0
    coef, *_ = np.linalg.lstsq(design / norms, values, rcond=None)
    return coef / norms
