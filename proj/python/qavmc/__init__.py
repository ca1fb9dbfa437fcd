"""Quantum-assisted variational Monte Carlo simulation suite."""

from ._core import (  # noqa: F401
    MolecularIntegrals,
    ProposalKernel,
    RandomStream,
    SectorBasis,
    SectorHamiltonian,
    Spectrum,
    apply_hopping_mix,
    autocovariance,
    build_hubbard,
    build_molecular,
    build_transition_matrix,
    config_energy,
    delta_epsilon,
    effective_matrix,
    effective_runtime_ratio,
    eigendecompose,
    exact_mixing_time,
    fit_scaling,
    ground_energy,
    ground_probabilities,
    hamming,
    integrated_autocorr,
    load_fcidump,
    make_classical,
    make_effective,
    make_quantum,
    make_quantum_interval,
    mixing_time_bounds,
    quantum_gap_tau_scan,
    quantum_matrix,
    run_chain,
    run_subcommand,
    spectral_gap_from_q,
    spin_flip_word,
    tau_grid,
    vmc_optimize,
)

__version__ = "0.1.0"
