"""Sliding-mode path following on arbitrary conic sections.

The library steers a particle with bounded disturbances onto any conic
section by regulating the two vector invariants that define the conic: the
specific angular momentum vector and the eccentricity vector.  It contains
the frame kinematics, the invariant algebra, the sliding-mode control laws,
a fixed-step plant simulator, three reference scenarios, and a CLI runner.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    AntiParallel,
    ConfigError,
    ConicControlError,
    DegenerateState,
    InvalidTarget,
    NumericalBlowup,
    PlaneSingularity,
)
from .orbital_mechanics import (
    ConicElements,
    OrbitTarget,
    eccentricity_rtn,
    eccentricity_rtn_rate,
    eccentricity_vector,
    elements_from_target,
    invariants,
    mu_from_period,
    specific_angular_momentum,
    specific_energy,
    state_from_target,
    target_from_elements,
)
from .plant_sim import (
    CSV_COLUMNS,
    ConstantAccel,
    DumbbellResidual,
    ForceModel,
    MovingPoint,
    MovingPointFeedthrough,
    PlantModels,
    PointMassGravity,
    RotatingDumbbell,
    SimConfig,
    SinusoidalAccel,
    SrpCannonball,
    TrajectoryLog,
    run_simulation,
    step_rk4,
)
from .rtn_frame import (
    RtnFrame,
    StateVector,
    build_frame,
    frame_rates,
    project_from_rtn,
    project_to_rtn,
    rtn_component_rates,
)
from .scenarios import (
    SCENARIO_BUILDERS,
    MetricsReport,
    Scenario,
    apply_overrides,
    build_scenario,
    compute_metrics,
    list_scenarios,
    run_scenario,
)
from .sliding_controller import (
    ControlCommand,
    ControllerConfig,
    SlidingState,
    beta_angle,
    beta_safeguard,
    build_F_G,
    control_full,
    control_normal,
    equivalent_accel,
    evaluate_controller,
    gains_from_bounds,
    lyapunov_value,
    surface_vector,
)
from .validation import CheckResult, run_all_checks

__all__ = [
    "AntiParallel",
    "CSV_COLUMNS",
    "CheckResult",
    "ConfigError",
    "ConicControlError",
    "ConicElements",
    "ConstantAccel",
    "ControlCommand",
    "ControllerConfig",
    "DegenerateState",
    "DumbbellResidual",
    "ForceModel",
    "InvalidTarget",
    "MetricsReport",
    "MovingPoint",
    "MovingPointFeedthrough",
    "NumericalBlowup",
    "OrbitTarget",
    "PlaneSingularity",
    "PlantModels",
    "PointMassGravity",
    "RotatingDumbbell",
    "RtnFrame",
    "SCENARIO_BUILDERS",
    "Scenario",
    "SimConfig",
    "SinusoidalAccel",
    "SlidingState",
    "SrpCannonball",
    "StateVector",
    "TrajectoryLog",
    "apply_overrides",
    "beta_angle",
    "beta_safeguard",
    "build_F_G",
    "build_frame",
    "build_scenario",
    "compute_metrics",
    "control_full",
    "control_normal",
    "eccentricity_rtn",
    "eccentricity_rtn_rate",
    "eccentricity_vector",
    "elements_from_target",
    "equivalent_accel",
    "evaluate_controller",
    "frame_rates",
    "gains_from_bounds",
    "invariants",
    "list_scenarios",
    "lyapunov_value",
    "mu_from_period",
    "project_from_rtn",
    "project_to_rtn",
    "rtn_component_rates",
    "run_all_checks",
    "run_scenario",
    "run_simulation",
    "specific_angular_momentum",
    "specific_energy",
    "state_from_target",
    "step_rk4",
    "surface_vector",
    "target_from_elements",
    "__version__",
]
