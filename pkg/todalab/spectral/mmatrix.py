"""
Evolution of the Weyl M-matrix along the Toda flow.

With B(t; z) = [[z - b_1, -2 a_0], [2 a_0, -(z - b_0)]] the law dN/dt = B N + N B^T
holds for N = M - (1 / (2 a_0)) [[0, 1], [1, 0]], i.e. with the off-diagonal resolvent
entries shifted by 1/(2 a_0). It follows from dG/dt = [P, G] and (J - z) G = I.
"""
import numpy as np

from todalab.error import DomainError
from todalab.jacobi.operator import JacobiOperator
from todalab.jacobi.toda import TodaFlow
from todalab.spectral.weyl import m_matrix

RESIDUAL_TOL = 1e-13

_SWAP = np.array([[0., 1.], [1., 0.]])


def flow_generator(op: JacobiOperator, z) -> np.ndarray:
    a0 = op.a_at(0)
    return np.array([[z - op.b_at(1), -2. * a0], [2. * a0, -(z - op.b_at(0))]])


def reduced_m_matrix(op: JacobiOperator, z, method=None) -> np.ndarray:
    return m_matrix(op, z, method=method) - _SWAP / (2. * op.a_at(0))


def m_matrix_flow_rhs(op: JacobiOperator, z, method=None) -> np.ndarray:
    B = flow_generator(op, z)
    N = reduced_m_matrix(op, z, method=method)
    return B @ N + N @ B.T


def m_matrix_flow_residual(flow: TodaFlow, z, t: float, h: float, method=None) -> float:
    """ || (N(t+h) - N(t-h)) / 2h - (B N + N B^T)(t) ||_inf along a Toda trajectory.

    The lattice is carried to t - h with the trajectory's own tolerance and the three
    samples t - h, t, t + h are then integrated at 1e-13 so that the difference
    quotient is limited by h rather than by the integrator.
    """
    if h <= 0:
        raise DomainError(f'h must be positive, got {h}')
    start = flow.at(t - h) if t - h != flow.t0 else flow.op0
    local = TodaFlow(start, tol=RESIDUAL_TOL, t0=t - h)
    before, centre, after = local.operators([t - h, t, t + h])
    derivative = (reduced_m_matrix(after, z, method) - reduced_m_matrix(before, z, method)) / (2. * h)
    return float(np.max(np.abs(derivative - m_matrix_flow_rhs(centre, z, method))))
