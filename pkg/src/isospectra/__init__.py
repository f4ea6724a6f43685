"""Typical entanglement spectra of random bipartite pure states at fixed entropy."""

__version__ = "0.1.0"

from .quadrature import (QuadratureError, ResidualReport, pv_chebyshev,
                         deformation_g, deformation_g_tilde, density_moment,
                         tricomi_residual)
from .analytic_spectra import (BETA_CRITICAL, U_CRITICAL, U_EVAPORATION, Atom,
                               Phase, SpectralDensity, SupportInterval,
                               beta_of_u, critical_values, entropy_density_s,
                               evaporated_spectrum, log_volume, mp_cdf,
                               mp_density, mp_quantile, phase_of_beta,
                               phase_of_u, sigma, support_edges, u_of_beta)
from .transitions import (DerivativeJump, TransitionReport, detect_transitions,
                          fit_half_jump_constant, s_derivatives)
from .haar_ensemble import (hermitian_eigenvalues, sample_evaporated,
                            sample_gaussian_matrix, sample_spectra,
                            schmidt_spectrum)
from .coulomb_gas import (ChainConfig, ChainResult, GasState, MoveCandidate,
                          empirical_spectrum, log_weight, parse_chain_config,
                          propose_pair_move, run_chain, write_samples_csv)
from .empirics import (Histogram, bin_density_masses, empirical_s,
                       entropy_deficit, ks_distance, l1_distance, summarize,
                       vn_entropy)

__all__ = [
    "__version__",
    "QuadratureError", "ResidualReport", "pv_chebyshev", "deformation_g",
    "deformation_g_tilde", "density_moment", "tricomi_residual",
    "BETA_CRITICAL", "U_CRITICAL", "U_EVAPORATION", "Atom", "Phase",
    "SpectralDensity", "SupportInterval", "beta_of_u", "critical_values",
    "entropy_density_s", "evaporated_spectrum", "log_volume", "mp_cdf",
    "mp_density", "mp_quantile", "phase_of_beta", "phase_of_u", "sigma",
    "support_edges", "u_of_beta",
    "DerivativeJump", "TransitionReport", "detect_transitions",
    "fit_half_jump_constant", "s_derivatives",
    "hermitian_eigenvalues", "sample_evaporated", "sample_gaussian_matrix",
    "sample_spectra", "schmidt_spectrum",
    "ChainConfig", "ChainResult", "GasState", "MoveCandidate",
    "empirical_spectrum", "log_weight", "parse_chain_config",
    "propose_pair_move", "run_chain", "write_samples_csv",
    "Histogram", "bin_density_masses", "empirical_s", "entropy_deficit",
    "ks_distance", "l1_distance", "summarize", "vn_entropy",
]
