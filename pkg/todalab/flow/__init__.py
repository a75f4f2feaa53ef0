from .craig import CraigReport, craig_report, truncated_constants, vector_field_gap_bound, running_sups
from .psi import psi, psi_jacobian, mu_velocity, mu_of_angles, torus_distance, tangent_norm
from .dubrovin import DubrovinTrajectory, integrate_dubrovin, integrate_field, circulation_period, \
    edge_dwell_times, dwell_exponent
from .traces import trace_Q, trace_P, reconstruct_operator
