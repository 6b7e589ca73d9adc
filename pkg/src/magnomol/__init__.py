"""Steady-state Gaussian correlations in a driven photon-magnon-molecular-vibration system."""

__version__ = "0.1.0"

from .dynamics import CovarianceMatrix, StabilityReport, evolve_covariance, is_stable, solve_lyapunov
from .measures import (
    NO_SIGNAL,
    CorrelationReport,
    contrast_ratio,
    correlate,
    gaussian_discord,
    log_negativity,
    one_vs_two_negativity,
    reduced_cm,
    residual_contangle,
    steering,
    symplectic_eigenvalues,
)
from .model import (
    LinearModel,
    SteadyState,
    SystemParams,
    drive_amplitude,
    effective_system,
    solve_steady_state,
    thermal_occupation,
)
from .presets import preset
from .sweep import Axis, SweepResult, SweepSpec, run_point, run_sweep
