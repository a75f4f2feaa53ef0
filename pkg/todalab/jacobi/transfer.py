"""
One-step transfer matrices on solution coordinates (u(n+1), a_n u(n)).

    S_n(z) = (1/a_n) [[z - b_n, -1], [a_n^2, 0]]

maps the coordinates at site n - 1 to those at site n, and det S_n = 1.
"""
import numpy as np

from todalab.error import DomainError
from todalab.jacobi.operator import JacobiOperator


def one_step(op: JacobiOperator, z, n: int) -> np.ndarray:
    a = op.a_at(n)
    b = op.b_at(n)
    dtype = np.complex128 if np.iscomplexobj(z) else np.float64
    return np.array([[z - b, -1.], [a ** 2, 0.]], dtype=dtype) / a


def transfer_matrix(op: JacobiOperator, z, n_from: int, n_to: int) -> np.ndarray:
    """ T(n_from, n_to) = S_{n_to} ... S_{n_from + 1}, taking the coordinates at site n_from
    to the coordinates at site n_to. """
    if n_to < n_from:
        raise DomainError(f'n_to must be >= n_from, got {n_from} -> {n_to}')
    dtype = np.complex128 if np.iscomplexobj(z) else np.float64
    T = np.eye(2, dtype=dtype)
    for n in range(n_from + 1, n_to + 1):
        T = one_step(op, z, n) @ T
    return T


def monodromy(op: JacobiOperator, z) -> np.ndarray:
    """ The period map T(0, p) of a periodic operator. """
    return transfer_matrix(op, z, 0, op.period)


def floquet_discriminant(op: JacobiOperator, x) -> float:
    """ Delta(x) = tr T(0, p); the spectrum is {x : |Delta(x)| <= 2}. """
    return np.trace(monodromy(op, x))


def floquet_multipliers(op: JacobiOperator, z) -> np.ndarray:
    """ Eigenvalues of the monodromy, ordered by increasing modulus; their product is 1. """
    lam = np.linalg.eigvals(monodromy(op, z))
    return lam[np.argsort(np.abs(lam), kind='stable')]

