"""Kinetics of impulse-induced Renyi entropy accumulation in an open
fermion system coupled to a weak probe.

The simulator integrates the reduced contour kinetics for the
inter-replica weight f3, computes the entropy response dS2(t), and checks
the scrambling/dissipative transition against the closed-form fixed-point,
growth-rate and saturation-entropy results.
"""

from ._backend import backend_name
from .analytics import (
    CollapseResult,
    FixedPoint,
    FixedPointSet,
    InsufficientDataError,
    PhaseReport,
    classify,
    collapse,
    fit_lyapunov,
    fixed_points,
    lyapunov_exponent,
    phase_report_record,
    saturation_entropy,
)
from .kinetics import (
    BlowUpError,
    EffectiveCouplings,
    IntegrationError,
    IntegratorControls,
    Plateau,
    StepSizeUnderflowError,
    Trajectory,
    entropy_curve,
    integrate,
    reduced_rhs,
    trajectory_to_csv,
)
from .state import (
    ContourBranch,
    DistributionState,
    SlavedState,
    distribution_matrix,
    init_thermal,
    renyi_delta,
    state_record,
)
from .sweep import SweepConfig, SweepRow, run_sweep, sweep_manifest, sweep_to_table
from .thermo import ThermalPoint, thermal_point

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "ThermalPoint",
    "thermal_point",
    "ContourBranch",
    "DistributionState",
    "SlavedState",
    "init_thermal",
    "distribution_matrix",
    "renyi_delta",
    "state_record",
    "EffectiveCouplings",
    "IntegratorControls",
    "Plateau",
    "Trajectory",
    "IntegrationError",
    "BlowUpError",
    "StepSizeUnderflowError",
    "reduced_rhs",
    "integrate",
    "entropy_curve",
    "trajectory_to_csv",
    "FixedPoint",
    "FixedPointSet",
    "PhaseReport",
    "CollapseResult",
    "InsufficientDataError",
    "lyapunov_exponent",
    "fixed_points",
    "saturation_entropy",
    "classify",
    "phase_report_record",
    "fit_lyapunov",
    "collapse",
    "SweepConfig",
    "SweepRow",
    "run_sweep",
    "sweep_to_table",
    "sweep_manifest",
]
