"""spintracer: a spin-1/2 in a rotating magnetic field, solved three ways.

The same evolution is computed by exact closed-form solutions of the
tracer-tagged coefficient equations, by their adiabatic-limit reduction, and
by direct numerical integration (coefficient equations, rotating frame, and
lab-frame Schroedinger equation).  The routes check each other; on top of
them sit geometric-phase extraction and scaling-exponent fits quantifying
how fast the adiabatic approximation converges.
"""

from .closedform import (
    RabiFrequency,
    SineTermReduction,
    adiabatic_coefficients,
    adiabatic_phase_rates,
    adiabatic_trajectory,
    exact_coefficients,
    exact_trajectory,
    rabi_frequency,
    sine_term_reduced,
)
from .integrate import (
    IntegrationError,
    IntegratorConfig,
    METHOD_ADAPTIVE,
    METHOD_FIXED_RK4,
    coefficient_rhs,
    integrate_coefficients,
    integrate_lab_frame,
    integrate_rotating_frame,
    project_to_instantaneous,
    rotating_generator,
    rotating_rhs,
    rotating_to_instantaneous,
    step_cap,
)
from .model import (
    FRAME_INSTANTANEOUS,
    FRAME_LAB,
    FRAME_ROTATING,
    SOLVER_ADIABATIC,
    SOLVER_EXACT,
    SOLVER_NUMERIC_LAB,
    SOLVER_NUMERIC_ODE,
    CoefficientPair,
    FieldParams,
    SpinHalfEigensystem,
    TracerFlags,
    Trajectory,
    eigensystem_at,
    hamiltonian_at,
    magnetic_field,
)
from .phases import (
    BERRY_ROUTES,
    LEAKAGE_THRESHOLD,
    LeakageWarning,
    PhaseReport,
    RabiContributions,
    ROUTE_ADIABATIC,
    ROUTE_EXACT,
    ROUTE_NUMERIC_LAB,
    ScalingFit,
    berry_phase,
    fit_scaling,
    rabi_contributions,
    wrap_angle,
)
from .sweep import METRICS, RunRecord, SweepResult, SweepSpec, evaluate_point, run_sweep
from .verify import CheckResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # model
    "FieldParams",
    "TracerFlags",
    "CoefficientPair",
    "SpinHalfEigensystem",
    "Trajectory",
    "magnetic_field",
    "hamiltonian_at",
    "eigensystem_at",
    "FRAME_INSTANTANEOUS",
    "FRAME_ROTATING",
    "FRAME_LAB",
    "SOLVER_EXACT",
    "SOLVER_ADIABATIC",
    "SOLVER_NUMERIC_ODE",
    "SOLVER_NUMERIC_LAB",
    # closed forms
    "RabiFrequency",
    "rabi_frequency",
    "exact_coefficients",
    "exact_trajectory",
    "SineTermReduction",
    "sine_term_reduced",
    "adiabatic_coefficients",
    "adiabatic_trajectory",
    "adiabatic_phase_rates",
    # integration
    "IntegratorConfig",
    "IntegrationError",
    "METHOD_ADAPTIVE",
    "METHOD_FIXED_RK4",
    "integrate_coefficients",
    "integrate_rotating_frame",
    "integrate_lab_frame",
    "project_to_instantaneous",
    "rotating_to_instantaneous",
    "rotating_generator",
    "rotating_rhs",
    "coefficient_rhs",
    "step_cap",
    # phase analysis
    "PhaseReport",
    "berry_phase",
    "BERRY_ROUTES",
    "ROUTE_ADIABATIC",
    "ROUTE_EXACT",
    "ROUTE_NUMERIC_LAB",
    "LEAKAGE_THRESHOLD",
    "LeakageWarning",
    "RabiContributions",
    "rabi_contributions",
    "ScalingFit",
    "fit_scaling",
    "wrap_angle",
    # sweeps and verification
    "SweepSpec",
    "RunRecord",
    "SweepResult",
    "METRICS",
    "run_sweep",
    "evaluate_point",
    "CheckResult",
    "run_verification",
]
