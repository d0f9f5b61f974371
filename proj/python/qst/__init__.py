"""Quantum state transfer along Krawtchouk-coupled spin chains.

Thin wrapper around the compiled extension: the spectral basis, closed- and
open-chain transfer fidelities, and the RK4 oracle integrators.
"""

from qst._core import (  # noqa: F401
    AmplitudeTrajectory,
    ChainSpec,
    DiscretizedReservoir,
    EigenAmplitudes,
    EnsembleConfig,
    FidelitySeries,
    IntegratorSettings,
    KernelVariant,
    QubitDensityMatrix,
    ReservoirSpec,
    SiteState,
    SpectralBasis,
    ValidationError,
    bright_amplitudes,
    chi,
    closed_fidelity_series,
    compare_trajectories,
    d_factor,
    eigen_amplitudes,
    evolve_closed,
    hamiltonian,
    initial_coefficients,
    integrate_memory_kernel,
    integrate_mode_discretized,
    kernel,
    krawtchouk_poly,
    norm_d,
    open_fidelity_series,
    orthonormal_basis,
    reduced_density_matrix,
    site_amplitudes,
    state_fidelity,
    survival_g,
    transfer_amplitude,
    weight,
)

__version__ = "0.1.0"
