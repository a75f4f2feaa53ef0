from .gapset import GapSet, gapset_diagnostics
from .floquet import periodic_spectrum, band_edges
from .weyl import weyl_vectors, weyl_m, green_diag, green_r11, green_offdiag, m_matrix, projective_distance
from .mmatrix import m_matrix_flow_residual, m_matrix_flow_rhs, flow_generator, reduced_m_matrix
from .dirichlet import DirichletDivisor, dirichlet_data, angles_from_divisor, divisor_from_angles, \
    sigma_of_angles, reflectionless_residual, band_samples
