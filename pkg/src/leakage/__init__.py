"""Eternal leakage bounds for gapped perturbed Hamiltonians.

Block-diagonalizes H = gamma*H0 + V through the perturbative Bloch wave
operator and the Schrieffer-Wolff transformation, evaluates the
time-independent leakage and evolution-distance bounds, and verifies
them against directly simulated dynamics on built-in models.
"""

from .operator_core import (
    OperatorMatrix,
    HermitianEigenSystem,
    operator_norm,
    herm_eig,
    unitary_propagator,
    inv_sqrt_psd,
    invert,
)
from .spectral_partition import (
    SpectralPartition,
    partition_by_threshold,
    partition_by_intervals,
    projection,
    complement,
    truncate_spectrum,
)
from .bloch_solver import (
    ProblemInstance,
    BlochSolution,
    solve_block_sylvester,
    bloch_recursion_step,
    solve_bloch_series,
    assemble_h_bloch,
)
from .schrieffer_wolff import SWSolution, sw_transform, perturbed_projection
from .bounds import (
    BoundReport,
    bound_report,
    delta_of,
    epsilon_of,
    catalan,
    catalan_tail,
    sw_distance_bound,
    leakage_bound,
    harmonic_chain_bound,
    transmon_leakage_bound,
)
from .dynamics import (
    LeakageReport,
    SweepResult,
    leakage_at,
    evolution_distance,
    run_leakage_experiment,
    gamma_scaling_sweep,
    truncation_convergence_study,
)
from .models import (
    ChainSpec,
    HarmonicChainSpec,
    TransmonSpec,
    build_chain,
    chain_dispersion,
    build_harmonic_chain,
    harmonic_chain_v_norm,
    transmon_bandgap,
    transmon_perturbation_norm,
)
from .verification import run_suite, check_instance, random_instance

__all__ = [
    "OperatorMatrix", "HermitianEigenSystem", "operator_norm", "herm_eig",
    "unitary_propagator", "inv_sqrt_psd", "invert",
    "SpectralPartition", "partition_by_threshold", "partition_by_intervals",
    "projection", "complement", "truncate_spectrum",
    "ProblemInstance", "BlochSolution", "solve_block_sylvester",
    "bloch_recursion_step", "solve_bloch_series", "assemble_h_bloch",
    "SWSolution", "sw_transform", "perturbed_projection",
    "BoundReport", "bound_report", "delta_of", "epsilon_of", "catalan",
    "catalan_tail", "sw_distance_bound", "leakage_bound",
    "harmonic_chain_bound", "transmon_leakage_bound",
    "LeakageReport", "SweepResult", "leakage_at", "evolution_distance",
    "run_leakage_experiment", "gamma_scaling_sweep",
    "truncation_convergence_study",
    "ChainSpec", "HarmonicChainSpec", "TransmonSpec", "build_chain",
    "chain_dispersion", "build_harmonic_chain", "harmonic_chain_v_norm",
    "transmon_bandgap", "transmon_perturbation_norm",
    "run_suite", "check_instance", "random_instance",
]

__version__ = "0.1.0"
