"""Aquarium-filtration clogging model.

A one-dimensional advection-diffusion-reaction system for dust and
dust-eating microbes in a tank with a recirculating filter.  The filter
state lives in two boundary ODEs coupled to the fields through
filtration-level-dependent boundary conditions; as the filter loads up it
absorbs less and the pump slows, and the long-time outcome is either a
converged equilibrium or unbounded dust growth (clogging).
"""

from .discretize import (GhostPair, GridSpec, OperatorCoefficients,
                         apply_operator, ghost_values, operator_coefficients,
                         spatial_average, spatial_operator)
from .experiments import (DEFAULT_THRESHOLD, TRANSITION_THRESHOLD,
                          Classification, RunRecord, SweepResult,
                          classify_clogging, lowest_clogging_f,
                          run_simulation, sweep_transition)
from .io import (ConfigError, InitialData, RunConfig, emit_run, emit_sweep,
                 load_config, write_config_echo)
from .model import (DEFAULT_INITIAL, DimensionalParams, ModelParams, State,
                    boundary_rhs, default_initial, derive_dimensionless,
                    f_tilde_of_sigma1, filter_function, reaction_v1,
                    reaction_v2, velocity, with_feeding)
from .stepping import (BLOWUP_LIMIT, LinearSolverError, NumericalBlowupError,
                       TimeSpec, crank_nicolson_solve, euler_predictor,
                       solve_bordered, step)
from .verification import (CheckReport, ManufacturedCase, check_extension,
                           check_ghost_identity, check_pole_geometry,
                           check_selfadjointness, convergence_study,
                           default_manufactured_case, extension_operator,
                           pole_modulus, run_suite)

__version__ = "1.0.0"

__all__ = [
    "BLOWUP_LIMIT", "CheckReport", "Classification", "ConfigError",
    "DEFAULT_THRESHOLD", "TRANSITION_THRESHOLD",
    "DEFAULT_INITIAL", "DimensionalParams", "GhostPair", "GridSpec",
    "InitialData", "LinearSolverError", "ManufacturedCase", "ModelParams",
    "NumericalBlowupError", "OperatorCoefficients", "RunConfig", "RunRecord",
    "State", "SweepResult", "TimeSpec", "apply_operator", "boundary_rhs",
    "check_extension", "check_ghost_identity", "check_pole_geometry",
    "check_selfadjointness", "classify_clogging", "convergence_study",
    "crank_nicolson_solve", "default_initial", "default_manufactured_case",
    "derive_dimensionless", "emit_run", "emit_sweep", "euler_predictor",
    "extension_operator", "f_tilde_of_sigma1", "filter_function",
    "ghost_values", "load_config", "lowest_clogging_f",
    "operator_coefficients", "pole_modulus", "reaction_v1", "reaction_v2",
    "run_simulation", "run_suite", "solve_bordered", "spatial_average",
    "spatial_operator", "step", "sweep_transition", "velocity",
    "with_feeding", "write_config_echo",
]
