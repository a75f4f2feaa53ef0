from .equilibrium import EquilibriumData, equilibrium_measure, green_function, equilibrium_cdf, equilibrium_density
from .abel import xi_harmonic, xi_at_infinity, abel_map, shift_character, shift_validation, translate_divisor, \
    divisor_sequence, site_angles, toda_frequencies
from .approximation import truncate_gapset, kept_gaps, approximation_experiment
from .appendix import density_of_states, dos_vs_equilibrium, lyapunov_exponent, thouless_residual, thouless_check, \
    geometric_mean, truncation_eigenvalues
