from .operator import JacobiOperator, apply_jacobi, lax_P_apply, lax_P_restriction_residual, \
    solve_recurrence, wronskian, conserved_traces
from .toda import TodaState, TodaFlow, toda_rhs, integrate_toda, propagate_solutions, flaschka, \
    inverse_flaschka, chain_drift, hamiltonian
from .transfer import one_step, transfer_matrix, monodromy, floquet_discriminant, floquet_multipliers
