"""Radial eigen-ODEs, asymptotic seeds, self-similar profiles and rate fits"""

from solvers.profiles import (
    DenseProfile,
    ExponentialCombination,
    ExpressionProfile,
    PiecewiseProfile,
    PowerProfile,
    RadialProfile,
    SeriesProfile,
    SolveStats,
    TransformedProfile,
    export_profile_csv,
    gaussian_factor,
    power_factor,
    scale_profile,
)
from solvers.radial import (
    AsymptoticSeed,
    BasisDecomposition,
    RadialODE,
    SeedBranch,
    abel_variation,
    asymptotic_seed,
    decompose_basis,
    integrate_branch,
    integrate_profile,
    radial_coefficients,
)
from solvers.fitting import ModeRate, RateFit, decaying_mode_rate, richardson_limit
from solvers.selfsimilar import (
    GraphProfile,
    InnerData,
    PlaneProfile,
    SelfSimilarKind,
    SelfSimilarPair,
    SlowExpansion,
    curvature_residual,
    slope_from_state,
    solve_selfsimilar_pair,
    solve_selfsimilar_profile,
)
from solvers.difference import GraphDifferenceCertificate, NormalHeightProfile, ScaledDistance, graph_difference, scaled_distance

__all__ = [
    "AsymptoticSeed",
    "BasisDecomposition",
    "DenseProfile",
    "ExponentialCombination",
    "ExpressionProfile",
    "GraphDifferenceCertificate",
    "GraphProfile",
    "InnerData",
    "ModeRate",
    "NormalHeightProfile",
    "PiecewiseProfile",
    "PlaneProfile",
    "PowerProfile",
    "RadialODE",
    "RadialProfile",
    "RateFit",
    "ScaledDistance",
    "SeedBranch",
    "SelfSimilarKind",
    "SelfSimilarPair",
    "SeriesProfile",
    "SlowExpansion",
    "SolveStats",
    "TransformedProfile",
    "abel_variation",
    "asymptotic_seed",
    "curvature_residual",
    "decaying_mode_rate",
    "decompose_basis",
    "export_profile_csv",
    "gaussian_factor",
    "graph_difference",
    "integrate_branch",
    "integrate_profile",
    "power_factor",
    "radial_coefficients",
    "richardson_limit",
    "scale_profile",
    "scaled_distance",
    "slope_from_state",
    "solve_selfsimilar_pair",
    "solve_selfsimilar_profile",
]
