"""Experiment configuration

One JSON document per run. Every numerical choice (dimensions, grids,
tolerances, seeds) lives here; ambient settings stay in config.config.
"""

import json
import logging
import types
import typing
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Any

from errors import ConfigError

logger = logging.getLogger(__name__)

SCENARIOS = (
    "certify",
    "identities",
    "poincare",
    "frequency-decay",
    "transform-check",
    "trace",
    "shrinker-rigidity",
    "expander-uniqueness",
    "psi-decay",
)

END_MODELS = ("exact_cone", "perturbed_cone", "selfsimilar_end")
WARPS = ("additive", "relative")
SELFSIMILAR_KINDS = ("expander", "shrinker")
REPORT_FORMATS = ("json", "csv-bundle")


@dataclass
class EndConfig:
    """End 描述"""

    model: str = "exact_cone"
    n: int = 3
    r_inner: float = 10.0
    r_max: float = 80.0
    """certification grid top"""
    link_radius: float = 1.0
    delta: float = 0.0
    warp: str = "additive"
    warp_power: float = 2.0
    selfsimilar_kind: str = "expander"
    slope: float = 1.0


@dataclass
class ParameterConfig:
    """Scenario parameters; empty `dimensions` means [end.n]"""

    dimensions: list[int] = field(default_factory=list)
    degrees: list[int] = field(default_factory=lambda: [1])
    m_values: list[float] = field(default_factory=lambda: [0.0])
    lam: float = 0.0

    # frequency grids
    rho_min: float = 10.0
    rho_max: float = 80.0
    rho_ratio: float = 1.05
    fd_step: float = 1e-3
    identity_radii: list[float] = field(default_factory=lambda: [12.0, 20.0])
    vanishing_radius: float = 30.0
    vanishing_tol: float = 1e-2

    # inequalities
    poincare_radii: list[float] = field(default_factory=lambda: [10.0, 15.0, 20.0])
    random_functions: int = 20
    harnack_radius: float = 20.0
    harnack_taus: list[float] = field(default_factory=lambda: [1.0, 2.0])
    tail_radii: list[float] = field(default_factory=lambda: [10.0, 20.0, 40.0])
    psi_radii: list[float] = field(default_factory=lambda: [8.0, 10.0, 12.0])
    """radii of the Ψ-weighted family (annuli [R, 2R])"""

    # transforms / certificates
    transform_mu: list[float] = field(default_factory=lambda: [-1.0, -0.5, 0.5, 1.0])
    certify_region: list[float] = field(default_factory=lambda: [10.0, 40.0])
    certify_samples: int = 200

    # self-similar / rates
    fit_window: list[float] = field(default_factory=lambda: [8.0, 14.0])
    distance_window: list[float] = field(default_factory=lambda: [8.0, 12.0])
    amplitude: float = 1.0
    seed_radius: float = 14.0
    pair_slope: float = 0.0

    # asymptotics
    tau_grid: list[float] = field(default_factory=lambda: [1.0, 2.0, 4.0, 8.0, 16.0])


@dataclass
class ToleranceConfig:
    quad_rel_tol: float = 1e-10
    quad_abs_tol: float = 1e-14
    tail_cutoff_ratio: float = 1e-16
    max_subdivisions: int = 200
    ode_rtol: float = 1e-10
    ode_atol: float = 1e-12


@dataclass
class ExperimentConfig:
    scenario: str
    end: EndConfig = field(default_factory=EndConfig)
    parameters: ParameterConfig = field(default_factory=ParameterConfig)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    output_dir: str | None = None
    seed: int = 7
    format: str = "csv-bundle"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        config = _build(cls, data, "config")
        config.validate()
        return config

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> None:
        end, params, tol = self.end, self.parameters, self.tolerances
        _require(self.scenario in SCENARIOS, "scenario", f"must be one of {', '.join(SCENARIOS)}")
        _require(self.format in REPORT_FORMATS, "format", f"must be one of {', '.join(REPORT_FORMATS)}")
        _require(end.model in END_MODELS, "end.model", f"must be one of {', '.join(END_MODELS)}")
        _require(end.warp in WARPS, "end.warp", f"must be one of {', '.join(WARPS)}")
        _require(end.selfsimilar_kind in SELFSIMILAR_KINDS, "end.selfsimilar_kind", "must be expander or shrinker")
        _require(end.n >= 2, "end.n", "dimension must be at least 2")
        _require(end.r_inner > 1.0, "end.r_inner", "must exceed 1")
        _require(end.r_max > end.r_inner, "end.r_max", "must exceed end.r_inner")
        _require(end.link_radius > 0, "end.link_radius", "must be positive")
        _require(end.warp_power >= 2.0, "end.warp_power", "must be at least 2")
        _require(all(d >= 2 for d in params.dimensions), "parameters.dimensions", "dimensions must be at least 2")
        _require(all(k >= 0 for k in params.degrees), "parameters.degrees", "mode degrees must be non-negative")
        _require(params.rho_min > 0 and params.rho_max > params.rho_min, "parameters.rho_max", "need 0 < rho_min < rho_max")
        _require(params.rho_ratio > 1.0, "parameters.rho_ratio", "geometric ratio must exceed 1")
        _require(0 < params.fd_step < 0.1, "parameters.fd_step", "relative step must lie in (0, 0.1)")
        _require(params.random_functions >= 1, "parameters.random_functions", "need at least one test function")
        _require(params.certify_samples >= 100, "parameters.certify_samples", "certification needs at least 100 samples")
        for name in ("certify_region", "fit_window", "distance_window"):
            window = getattr(params, name)
            _require(len(window) == 2 and 0 < window[0] < window[1], f"parameters.{name}", "expected [lo, hi] with 0 < lo < hi")
        _require(all(t >= 1.0 for t in params.tau_grid), "parameters.tau_grid", "flow times must be at least 1")
        for name in ("identity_radii", "poincare_radii", "tail_radii", "psi_radii"):
            radii = getattr(params, name)
            _require(bool(radii) and all(r > 0 for r in radii), f"parameters.{name}", "expected a non-empty list of positive radii")
        _require(tol.quad_rel_tol > 0 and tol.quad_abs_tol > 0, "tolerances", "quadrature tolerances must be positive")
        _require(0 < tol.tail_cutoff_ratio <= 1e-12, "tolerances.tail_cutoff_ratio", "must lie in (0, 1e-12]")
        _require(tol.max_subdivisions >= 10, "tolerances.max_subdivisions", "must be at least 10")
        _require(tol.ode_rtol > 0 and tol.ode_atol > 0, "tolerances", "ODE tolerances must be positive")

    def case_dimensions(self) -> list[int]:
        return list(self.parameters.dimensions) or [self.end.n]


def load_experiment(path: str | Path) -> ExperimentConfig:
    """Read and validate an experiment config file"""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in {path}: {e.msg}", line=e.lineno, column=e.colno) from e

    if not isinstance(data, dict):
        raise ConfigError(f"Config root must be an object: {path}")
    config = ExperimentConfig.from_dict(data)
    logger.debug(f"Loaded config {path} (scenario={config.scenario})")
    return config


def _require(condition: bool, key: str, message: str) -> None:
    if not condition:
        raise ConfigError(f"Invalid value for '{key}': {message}", key=key)


def _build(cls: type, data: Any, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"'{path}' must be an object", key=path)

    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"Unknown field(s) in '{path}': {', '.join(unknown)}", key=path)

    hints = typing.get_type_hints(cls)
    kwargs = {}
    for f in fields(cls):
        if f.name not in data:
            continue
        kwargs[f.name] = _coerce(data[f.name], hints[f.name], f"{path}.{f.name}")

    try:
        return cls(**kwargs)
    except TypeError as e:
        raise ConfigError(f"Missing required field in '{path}': {e}", key=path) from e


def _coerce(value: Any, hint: Any, path: str):
    if is_dataclass(hint):
        return _build(hint, value, path)

    origin = typing.get_origin(hint)
    if origin in (types.UnionType, typing.Union):
        options = typing.get_args(hint)
        if value is None and type(None) in options:
            return None
        inner = next(o for o in options if o is not type(None))
        return _coerce(value, inner, path)

    if origin is list:
        if not isinstance(value, list):
            raise ConfigError(f"'{path}' must be a list", key=path)
        (item,) = typing.get_args(hint)
        return [_coerce(v, item, f"{path}[{i}]") for i, v in enumerate(value)]

    if hint is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"'{path}' must be a boolean", key=path)
        return value
    if hint is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"'{path}' must be an integer", key=path)
        return value
    if hint is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"'{path}' must be a number", key=path)
        return float(value)
    if hint is str:
        if not isinstance(value, str):
            raise ConfigError(f"'{path}' must be a string", key=path)
        return value

    raise ConfigError(f"Unsupported field type at '{path}'", key=path)
