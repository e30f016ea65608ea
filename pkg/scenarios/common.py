"""场景共用的构造：配置里的端、慢分支本征模式与求积设置"""

import logging
import math
from functools import lru_cache

from config.experiment import EndConfig, ExperimentConfig
from geometry import EndDescription, WeaklyConicalEnd, build_end
from geometry.link import DEFAULT_DEGREES
from operators import DriftOperator, EigenContext, SeparatedFunction, separated
from quadrature import QuadratureSpec
from solvers import SeedBranch, asymptotic_seed, integrate_profile, radial_coefficients, solve_selfsimilar_profile

logger = logging.getLogger(__name__)

FAR_SEED = 100.0
"""slow-branch seed radius on ends that are not exact cones"""


def quadrature_spec(config: ExperimentConfig) -> QuadratureSpec:
    tol = config.tolerances
    return QuadratureSpec(
        rel_tol=tol.quad_rel_tol,
        abs_tol=tol.quad_abs_tol,
        max_subdivisions=tol.max_subdivisions,
        tail_cutoff_ratio=tol.tail_cutoff_ratio,
    )


def config_end(config: ExperimentConfig, n: int | None = None) -> WeaklyConicalEnd:
    """The configured end model in dimension n (default end.n)"""
    end = config.end
    degrees = tuple(sorted(set(DEFAULT_DEGREES) | set(config.parameters.degrees)))
    return _cached_end(_end_key(end, end.n if n is None else n), degrees)


def _end_key(end: EndConfig, n: int) -> tuple:
    return (end.model, n, end.r_inner, end.r_max, end.link_radius, end.delta, end.warp, end.warp_power, end.selfsimilar_kind, end.slope)


@lru_cache(maxsize=32)
def _cached_end(key: tuple, degrees: tuple[int, ...]) -> WeaklyConicalEnd:
    model, n, r_inner, r_max, link_radius, delta, warp, warp_power, kind, slope = key
    profile = None
    if model == "selfsimilar_end":
        profile = solve_selfsimilar_profile(kind, n, slope=slope)
    description = EndDescription(
        model=model,
        n=n,
        r_inner=r_inner,
        r_max=r_max,
        link_radius=link_radius,
        delta=delta,
        warp=warp,
        warp_power=warp_power,
        profile=profile,
        degrees=degrees,
    )
    return build_end(description)


def slow_mode(
    end: WeaklyConicalEnd,
    degree: int,
    m: float = 0.0,
    lam: float = 0.0,
    seed_radius: float = 10.0,
    config: ExperimentConfig | None = None,
) -> SeparatedFunction:
    """Slow branch of (L_m + λ) in the given link mode

    Exact cones use the asymptotic series itself. Other ends integrate it
    inward from a far seed, keeping the series as the tail.
    """
    mu_link = end.link.mode(degree).eigenvalue
    ode = radial_coefficients(end, m, lam, mu_link, "minus")
    context = EigenContext(DriftOperator.minus(m), lam)
    label = f"slow(n={end.n}, μ={mu_link:g}, m={m:g}, λ={lam:g})"
    if end.is_exact_cone:
        profile = asymptotic_seed(ode, SeedBranch.SLOW, seed_radius).profile()
    else:
        far = min(FAR_SEED, 0.9 * end.r_max) if math.isfinite(end.r_max) else FAR_SEED
        rtol, atol = (config.tolerances.ode_rtol, config.tolerances.ode_atol) if config else (1e-10, 1e-12)
        profile = integrate_profile(ode, asymptotic_seed(ode, SeedBranch.SLOW, far), end.r_inner, rtol, atol)
        logger.debug(f"{label}: seeded at {far:g} and integrated to R_inner = {end.r_inner:g}")
    return separated(end, profile, degree, context, label=label)


def case_label(**parts) -> str:
    """frequency[n=3,l=1,m=0] 形式的检查名"""
    return ",".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in parts.items())
