"""Two-species linear Landau damping toolkit.

Builds quasi-neutral electron-ion equilibria, reduces the linearized
dynamics of each spatial Fourier mode to a Volterra equation in time,
checks the two-species stability criterion and the hypotheses of the decay
theorem, and cross-validates everything against an independent phase-space
solver. See the README for conventions (Fourier normalization, kernel
orientation, continuation branch) and the CLI surface.
"""

from ._version import __version__
from .errors import (ParameterError, ModeError, DomainError, RangeError,
                     ConfigError, NoDecayBoundError, DivergenceError,
                     NoRootError, InsufficientDataError, DataLossError)
from .equilibria import (SpeciesParams, EquilibriumProfile, make_maxwellian,
                         make_two_stream, make_bump_on_tail, make_tabulated,
                         profile_derivative, profile_fourier,
                         check_quasi_neutrality)
from .potential import (InteractionPotential, coulomb_potential,
                        screened_potential, custom_potential, field_mode,
                        electric_energy)
from .kernels import (ModeKernel, electron_kernel, ion_kernel,
                      combined_kernel, kernel_combined, DecayBound,
                      fit_decay_bound, LaplaceResult, laplace_transform,
                      laplace_grid)
from .penrose import (PenroseReport, MarginScan, penrose_criterion,
                      penrose_margin, penrose_margin_refined, penrose_report,
                      principal_value_integral, dispersion_Z,
                      cauchy_integral_continued, find_derivative_zeros)
from .perturbations import CosinePerturbation, ZeroPerturbation
from .volterra import (ModeForcing, ModeSeries, make_forcing, solve_mode,
                       solve_difference_mode, solve_two_kernel_mode,
                       export_rows, ForcingBounds, fit_forcing_bounds,
                       TheoremConstants, TheoremCheck, theorem_bound)
from .oracle import (PhaseSpacePerturbation, OracleTrajectory,
                     from_perturbations, free_stream, field_kick, evolve)
from .analysis import (DecayFit, fit_exponential_envelope, default_window,
                       difference_transform, dispersion_root,
                       suggest_root_guess, compare_trajectories)
from .config import ExperimentConfig, parse_config, load_config
from .runner import ExperimentReport, run_experiment

__all__ = [
    "__version__",
    "ParameterError", "ModeError", "DomainError", "RangeError",
    "ConfigError", "NoDecayBoundError", "DivergenceError", "NoRootError",
    "InsufficientDataError", "DataLossError",
    "SpeciesParams", "EquilibriumProfile", "make_maxwellian",
    "make_two_stream", "make_bump_on_tail", "make_tabulated",
    "profile_derivative", "profile_fourier", "check_quasi_neutrality",
    "InteractionPotential", "coulomb_potential", "screened_potential",
    "custom_potential", "field_mode", "electric_energy",
    "ModeKernel", "electron_kernel", "ion_kernel", "combined_kernel",
    "kernel_combined", "DecayBound", "fit_decay_bound", "LaplaceResult",
    "laplace_transform", "laplace_grid",
    "PenroseReport", "MarginScan", "penrose_criterion", "penrose_margin",
    "penrose_margin_refined", "penrose_report", "principal_value_integral",
    "dispersion_Z", "cauchy_integral_continued", "find_derivative_zeros",
    "CosinePerturbation", "ZeroPerturbation",
    "ModeForcing", "ModeSeries", "make_forcing", "solve_mode",
    "solve_difference_mode", "solve_two_kernel_mode", "export_rows",
    "ForcingBounds", "fit_forcing_bounds", "TheoremConstants",
    "TheoremCheck", "theorem_bound",
    "PhaseSpacePerturbation", "OracleTrajectory", "from_perturbations",
    "free_stream", "field_kick", "evolve",
    "DecayFit", "fit_exponential_envelope", "default_window",
    "difference_transform", "dispersion_root", "suggest_root_guess",
    "compare_trajectories",
    "ExperimentConfig", "parse_config", "load_config",
    "ExperimentReport", "run_experiment",
]
