"""Exact state-vector simulation of periodically driven disordered spin chains.

The package is organized bottom-up:

- ``state``: L-qubit state vectors and the minimal gate set (x/z rotations,
  diagonal phases, Pauli-Z expectations).
- ``model``: drive parameters, quenched-disorder sampling, interaction tables.
- ``evolution``: one-period step compilation and application, including the
  Heisenberg-to-Ising composite pulse sequence.
- ``observables``: subharmonic autocorrelator traces, lifetimes, edge/bulk
  diagnostics.
- ``sweep``: disorder-ensemble campaigns over parameter grids, lifetime
  scaling fits.
- ``cli``: config-driven command line (``evolve``, ``sweep``, ``scaling``,
  ``h2i``) with CSV/JSON record output.
"""

from .errors import CapacityError, ConfigError
from .state import (
    StateVector,
    basis_index,
    basis_state,
    apply_diagonal_phases,
    apply_x_rotation,
    apply_z_rotation,
    sigma_z_expectation,
)
from .model import (
    DisorderDistribution,
    DisorderRealization,
    FloquetDriveSpec,
    heisenberg_hamiltonian,
    ising_phase_table,
    realization_rng,
    sample_realization,
)
from .evolution import (
    FloquetStepPlan,
    PeriodPropagator,
    apply_h2i_period,
    apply_period,
    compile_step,
    dense_period_unitary,
    h2i_composite,
)
from .observables import (
    AutocorrelatorTrace,
    Lifetime,
    bulk_qubit,
    final_min_z,
    first_crossing,
    fspt_diagnostic,
    lifetime,
    record_trace,
    scaling_qubit,
)
from .sweep import (
    ScalingFit,
    SweepAxis,
    SweepRecord,
    combine_moments,
    fit_log_least_squares,
    lifetime_scaling_campaign,
    run_campaign,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConfigError",
    "StateVector",
    "basis_index",
    "basis_state",
    "apply_diagonal_phases",
    "apply_x_rotation",
    "apply_z_rotation",
    "sigma_z_expectation",
    "DisorderDistribution",
    "DisorderRealization",
    "FloquetDriveSpec",
    "heisenberg_hamiltonian",
    "ising_phase_table",
    "realization_rng",
    "sample_realization",
    "FloquetStepPlan",
    "PeriodPropagator",
    "apply_h2i_period",
    "apply_period",
    "compile_step",
    "dense_period_unitary",
    "h2i_composite",
    "AutocorrelatorTrace",
    "Lifetime",
    "bulk_qubit",
    "final_min_z",
    "first_crossing",
    "fspt_diagnostic",
    "lifetime",
    "record_trace",
    "scaling_qubit",
    "ScalingFit",
    "SweepAxis",
    "SweepRecord",
    "combine_moments",
    "fit_log_least_squares",
    "lifetime_scaling_campaign",
    "run_campaign",
    "__version__",
]
