"""celsim: two-mode cavity radiation with thermal seeding.

Closed-form second moments, squeezing/entanglement/intensity observables,
two independent numerical oracles (moment ODEs and a truncated Fock-space
density matrix) and figure-reproduction sweeps.
"""

from .analytic import (
    CoefficientSet,
    MomentState,
    MomentTrajectory,
    coefficients,
    moments,
    noise_correlators,
    steady_state_moments,
    steady_state_variance,
    trajectory,
)
from .metrics import (
    CovarianceRecord,
    covariance_record,
    is_entangled,
    mean_photon_number,
    quadrature_variance,
)
from .model import (
    DriftDiffusion,
    ModelParams,
    ValidationReport,
    drift_diffusion,
    thermal_occupancy,
    validate,
)
from .ode_oracle import initial_slope_check, integrate
from .fock_oracle import FockState, evolve, thermal_product_state
from .sweep import FigureConfig, figure_config, run_all_figures, run_figure, verify_all

__all__ = [
    "CoefficientSet",
    "CovarianceRecord",
    "DriftDiffusion",
    "FigureConfig",
    "FockState",
    "ModelParams",
    "MomentState",
    "MomentTrajectory",
    "ValidationReport",
    "coefficients",
    "covariance_record",
    "drift_diffusion",
    "evolve",
    "figure_config",
    "initial_slope_check",
    "integrate",
    "is_entangled",
    "mean_photon_number",
    "moments",
    "noise_correlators",
    "quadrature_variance",
    "run_all_figures",
    "run_figure",
    "steady_state_moments",
    "steady_state_variance",
    "thermal_occupancy",
    "thermal_product_state",
    "trajectory",
    "validate",
    "verify_all",
]

__version__ = "0.1.0"
