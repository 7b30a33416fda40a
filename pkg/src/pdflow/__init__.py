"""Continuous-time primal-dual flows for linearly constrained convex problems.

A second-order-in-time primal variable with variable mass, time-rescaled
gradient forcing, curvature damping, and a vanishing strong-convexification
term is coupled to a first-order dual ascent.  The package integrates the
flow, tracks the drifting regularized saddle points it chases, classifies
parameter choices into convergence-rate regimes, and checks observed decay
rates against the predicted ones.

Layout:

- ``problem``     — objective/constraint containers and a seeded generator
- ``lagrangian``  — time-varying augmented Lagrangian, saddle points,
                    minimum-norm limit point
- ``dynamics``    — the flow's vector field, mass functions, regime
                    classification
- ``integrator``  — adaptive Runge-Kutta 5(4) with dense log-grid output
- ``diagnostics`` — energy functional, per-sample metrics, rate fitting,
                    oscillation measures
- ``cli``         — experiment configs, presets, sweeps, CSV/summary output
- ``rng``         — deterministic counter-based Gaussian streams
"""

from .diagnostics import (
    EnergyReport,
    MetricRow,
    OscillationMeasure,
    RateEstimate,
    energy,
    energy_coefficients,
    fit_rate,
    metrics,
    oscillation_measure,
)
from .dynamics import (
    AssumptionReport,
    MassFunction,
    ParameterSet,
    RateExponents,
    RegimeReport,
    TrajectoryState,
    build_field,
    mass_eval,
    theta,
    validate_and_classify,
    vector_field,
)
from .errors import (
    ConfigError,
    DimensionMismatchError,
    DivergenceError,
    DomainError,
    EstimationError,
    InfeasibleProblemError,
    SolverError,
    TruncatedTrajectoryError,
)
from .integrator import IntegratorConfig, StepStats, Trajectory, integrate, log_grid
from .lagrangian import (
    MinNormSolution,
    RegularizationSpec,
    SaddlePoint,
    grad_lambda_Lt,
    grad_x_Lt,
    lagrangian_value,
    min_norm_solution,
    plain_lagrangian,
    saddle_path,
    saddle_point,
)
from .problem import (
    Problem,
    QuadraticProblem,
    SmoothProblem,
    ToyProblem,
    eval_objective,
    feasibility_residual,
    make_random_qp,
    problem_from_text,
    problem_to_text,
)
from .rng import GaussianStream

__version__ = "0.1.0"

__all__ = [
    "AssumptionReport",
    "ConfigError",
    "DimensionMismatchError",
    "DivergenceError",
    "DomainError",
    "EnergyReport",
    "EstimationError",
    "GaussianStream",
    "InfeasibleProblemError",
    "IntegratorConfig",
    "MassFunction",
    "MetricRow",
    "MinNormSolution",
    "OscillationMeasure",
    "ParameterSet",
    "Problem",
    "QuadraticProblem",
    "RateEstimate",
    "RateExponents",
    "RegimeReport",
    "RegularizationSpec",
    "SaddlePoint",
    "SmoothProblem",
    "SolverError",
    "StepStats",
    "ToyProblem",
    "Trajectory",
    "TrajectoryState",
    "TruncatedTrajectoryError",
    "build_field",
    "energy",
    "energy_coefficients",
    "eval_objective",
    "feasibility_residual",
    "fit_rate",
    "grad_lambda_Lt",
    "grad_x_Lt",
    "integrate",
    "lagrangian_value",
    "log_grid",
    "make_random_qp",
    "mass_eval",
    "metrics",
    "min_norm_solution",
    "oscillation_measure",
    "plain_lagrangian",
    "problem_from_text",
    "problem_to_text",
    "saddle_path",
    "saddle_point",
    "theta",
    "validate_and_classify",
    "vector_field",
]
