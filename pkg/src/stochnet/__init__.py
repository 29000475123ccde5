"""Dimension reduction for stochastic dynamical networks.

Build a network of coupled stochastic differential equations, collapse it
to a single effective equation through a strength-weighted mean field, and
compare ensemble statistics of the two descriptions. The cross-realization
standard deviation of the effective variable serves as an indicator of how
strongly noise shapes the system.
"""

from __future__ import annotations

from .analysis import (
    ConvergenceReport,
    StdTrajectory,
    convergence_report,
    ensemble_mean,
    ensemble_std,
    project_ensemble,
    reduction_error,
    stochasticity_score,
)
from .chebfit import (
    ChebFit1D,
    ChebFit2D,
    cheb_fit_1d,
    cheb_fit_2d,
    collapse_coupling,
)
from .config import ExperimentConfig, load_config
from .dynamics import (
    CoefficientModel,
    NodeDynamics,
    coefficient_dynamics,
    full_diffusion,
    full_drift,
    gen_alpha,
    glv_coefficients,
    glv_model,
    ou_coefficients,
    ou_model,
)
from .errors import (
    BlowUp,
    ConfigError,
    DegenerateScale,
    DegreeTooHigh,
    DimensionMismatch,
    InvalidParameter,
    IsolatedSpecies,
    MissingManifest,
    NonFiniteSample,
    NonFiniteState,
    ParseError,
    StochnetError,
    TooFewRealizations,
    ZeroTotalStrength,
)
from .network import (
    BipartiteIncidence,
    NetworkMatrix,
    StrengthVectors,
    gen_mutualistic,
    gen_ou_network,
    load_incidence,
    load_matrix,
    mean_field,
    mean_field_weights,
    save_incidence,
    save_matrix,
    strengths,
    synthetic_incidence,
)
from .pipeline import RunManifest, build_system, reduce_system, run_simulation
from .reduction import (
    EffectiveModel,
    FitSpec,
    effective_diffusion,
    effective_drift,
    effective_params,
    reduce_from_functions,
)
from .sde import (
    Ensemble,
    IntegrationSpec,
    Path,
    integrate_effective,
    integrate_full,
    run_effective_ensemble,
    run_ensemble,
    run_full_ensemble,
    run_matched_effective_ensemble,
    substream,
)

__version__ = "1.0.0"

__all__ = [
    "BipartiteIncidence",
    "BlowUp",
    "ChebFit1D",
    "ChebFit2D",
    "CoefficientModel",
    "ConfigError",
    "ConvergenceReport",
    "DegenerateScale",
    "DegreeTooHigh",
    "DimensionMismatch",
    "EffectiveModel",
    "Ensemble",
    "ExperimentConfig",
    "FitSpec",
    "IntegrationSpec",
    "InvalidParameter",
    "IsolatedSpecies",
    "MissingManifest",
    "NetworkMatrix",
    "NodeDynamics",
    "NonFiniteSample",
    "NonFiniteState",
    "ParseError",
    "Path",
    "RunManifest",
    "StdTrajectory",
    "StochnetError",
    "StrengthVectors",
    "TooFewRealizations",
    "ZeroTotalStrength",
    "build_system",
    "cheb_fit_1d",
    "cheb_fit_2d",
    "coefficient_dynamics",
    "collapse_coupling",
    "convergence_report",
    "effective_diffusion",
    "effective_drift",
    "effective_params",
    "ensemble_mean",
    "ensemble_std",
    "full_diffusion",
    "full_drift",
    "gen_alpha",
    "gen_mutualistic",
    "gen_ou_network",
    "glv_coefficients",
    "glv_model",
    "integrate_effective",
    "integrate_full",
    "load_config",
    "load_incidence",
    "load_matrix",
    "mean_field",
    "mean_field_weights",
    "ou_coefficients",
    "ou_model",
    "project_ensemble",
    "reduce_from_functions",
    "reduce_system",
    "reduction_error",
    "run_effective_ensemble",
    "run_ensemble",
    "run_full_ensemble",
    "run_matched_effective_ensemble",
    "run_simulation",
    "save_incidence",
    "save_matrix",
    "stochasticity_score",
    "strengths",
    "substream",
    "synthetic_incidence",
    "__version__",
]
