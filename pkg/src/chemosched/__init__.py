"""Minimum-cost and min-max-size treatment scheduling over a fixed horizon.

Tumor size follows a power-law growth recurrence between period starts;
administering a treatment multiplies the grown size by a retention factor.
The package simulates schedules, certifies and runs the threshold policy,
solves all program variants exactly by dynamic programming with label
dominance, builds the corresponding mixed-integer linear models, and exports
them in LP format for external cross-checking.
"""

from .core import (
    BandViolation,
    ChemoschedError,
    Diagnostic,
    ExponentialParams,
    FeasibilityReport,
    GompertzParams,
    GrowthLaw,
    GrowthModelError,
    InfeasibleInstanceError,
    InternalConsistencyError,
    MinCost,
    MinMaxSize,
    ProblemSpec,
    Schedule,
    ScheduleError,
    SizeGuardError,
    SolveReport,
    SpecError,
    Trajectory,
    Treatment,
    exponential_coefficients,
    gompertz_coefficients,
    grow,
    simulate,
    spec_from_dict,
    spec_from_json,
    spec_to_dict,
    spec_to_json,
    treat,
    validate_spec,
)
from .heuristic import (
    HeuristicResult,
    commutation_holds,
    heuristic_schedule,
    threshold,
)
from .milp import (
    MilpModel,
    build_p1,
    build_p2,
    build_p3,
    build_pi,
    export_lp,
    parse_lp,
)
from .oracle import ValueTable, bellman_solve, brute_force
from .solver import Label, dominates, solve, sweep_budget

__all__ = [
    "BandViolation",
    "ChemoschedError",
    "Diagnostic",
    "ExponentialParams",
    "FeasibilityReport",
    "GompertzParams",
    "GrowthLaw",
    "GrowthModelError",
    "HeuristicResult",
    "InfeasibleInstanceError",
    "InternalConsistencyError",
    "Label",
    "MilpModel",
    "MinCost",
    "MinMaxSize",
    "ProblemSpec",
    "Schedule",
    "ScheduleError",
    "SizeGuardError",
    "SolveReport",
    "SpecError",
    "Trajectory",
    "Treatment",
    "ValueTable",
    "bellman_solve",
    "brute_force",
    "build_p1",
    "build_p2",
    "build_p3",
    "build_pi",
    "commutation_holds",
    "dominates",
    "exponential_coefficients",
    "export_lp",
    "gompertz_coefficients",
    "grow",
    "heuristic_schedule",
    "parse_lp",
    "simulate",
    "solve",
    "spec_from_dict",
    "spec_from_json",
    "spec_to_dict",
    "spec_to_json",
    "sweep_budget",
    "threshold",
    "treat",
    "validate_spec",
]

__version__ = "0.1.0"
