"""
Weyl solutions, m-functions and Green's function entries.

A solution u of Ju = zu is recorded by its coordinates V = (x, y) = (u(1), a_0 u(0)).
u_+ is square summable at +infinity and u_- at -infinity; with D = x_+ y_- - x_- y_+ =
W(u_-, u_+),

    m_+ = -x_+ / y_+,    m_- = x_- / y_-,

    r(0, 0) = y_+ y_- / (a_0^2 D) = -1 / (a_0^2 (m_+ + m_-)),
    r(1, 1) = x_+ x_- / D = m_+ m_- / (m_+ + m_-),
    r(1, 0) = x_+ y_- / (a_0 D).

Both m-functions are Herglotz.
"""
from typing import Tuple

import numpy as np
from numba import njit

from todalab.error import ConvergenceError, DomainError
from todalab.jacobi.operator import JacobiOperator
from todalab.jacobi.transfer import monodromy

FLOQUET = 'floquet'
RECURSION = 'recursion'

DEPTH_START = 64
DEPTH_CAP = 2 ** 20
PROJECTIVE_TOL = 1e-12


@njit(cache=True)
def _backward_coordinates(a, b, z):
    """ Coordinates at site 0 of the solution with u(N + 1) = 0, a_N u(N) = 1.

    ``a[i], b[i]`` hold the coefficients at site N - i, for i = 0 .. N - 1.
    """
    x = 0. + 0.j
    y = 1. + 0.j
    for i in range(a.shape[0]):
        an = a[i]
        x, y = y / an, ((z - b[i]) * y / an - an * x)
        scale = max(abs(x), abs(y))
        x /= scale
        y /= scale
    return x, y


@njit(cache=True)
def _forward_coordinates(a, b, z):
    """ Coordinates at site 0 of the solution with u(-N + 1) = 1, a_{-N} u(-N) = 0.

    ``a[i], b[i]`` hold the coefficients at site -N + 1 + i, for i = 0 .. N - 1.
    """
    x = 1. + 0.j
    y = 0. + 0.j
    for i in range(a.shape[0]):
        an = a[i]
        x, y = ((z - b[i]) * x - y) / an, an * x
        scale = max(abs(x), abs(y))
        x /= scale
        y /= scale
    return x, y


def _normalize(v):
    return v / np.linalg.norm(v)


def projective_distance(v, w) -> float:
    """ Chordal distance of two points of CP^1 given by representatives. """
    return float(abs(v[0] * w[1] - v[1] * w[0]) / (np.linalg.norm(v) * np.linalg.norm(w)))


def _recursion_vector(op: JacobiOperator, z, side: int):
    z = complex(z)
    depth = DEPTH_START
    previous = None
    while depth <= DEPTH_CAP:
        if side > 0:
            sites = np.arange(depth, 0, -1)
            x, y = _backward_coordinates(op.a_at(sites), op.b_at(sites), z)
        else:
            sites = np.arange(-depth + 1, 1)
            x, y = _forward_coordinates(op.a_at(sites), op.b_at(sites), z)
        v = _normalize(np.array([x, y]))
        if previous is not None and projective_distance(v, previous) < PROJECTIVE_TOL:
            return v
        previous = v
        depth *= 2
    raise ConvergenceError(f'Weyl recursion for side {side:+d} at z={z} did not settle by depth {DEPTH_CAP}',
                           last_iterates=(previous, v))


def _floquet_vectors(op: JacobiOperator, z):
    w, vecs = np.linalg.eig(monodromy(op, complex(z)))
    order = np.argsort(np.abs(w))
    small, large = w[order[0]], w[order[1]]
    if np.isclose(abs(small), abs(large), rtol=1e-13, atol=0.):
        raise DomainError(f'z={z} lies on the spectrum: both Floquet multipliers have modulus {abs(small):.17g}')
    return _normalize(vecs[:, order[0]]), _normalize(vecs[:, order[1]])


def weyl_vectors(op: JacobiOperator, z, method=None) -> Tuple[np.ndarray, np.ndarray]:
    """ (V_+, V_-), the normalised (u(1), a_0 u(0)) coordinates of the two Weyl solutions.

    Args:
        op: the operator.
        z: spectral parameter off the spectrum.
        method: ``'floquet'`` (periodic operators only) takes the eigenvectors of the
            monodromy with multiplier inside / outside the unit circle; ``'recursion'``
            iterates the transfer matrices from depth 64, doubling until the projective
            point settles to 1e-12. Defaults to Floquet for periodic operators.

    Raises:
        ConvergenceError: the recursion did not settle by depth 2^20.
    """
    if method is None:
        method = FLOQUET if op.is_periodic else RECURSION
    if method == FLOQUET:
        return _floquet_vectors(op, z)
    if method == RECURSION:
        return _recursion_vector(op, z, +1), _recursion_vector(op, z, -1)
    raise DomainError(f'unknown Weyl method {method!r}')


def _real_if_real(z, value):
    if np.isrealobj(z):
        return float(np.real(value))
    return complex(value)


def weyl_m(op: JacobiOperator, z, side, method=None):
    """ m_+(z) for side = +1 / '+', m_-(z) for side = -1 / '-'. """
    sign = {'+': 1, '-': -1, 1: 1, -1: -1}.get(side)
    if sign is None:
        raise DomainError(f'side must be one of +1, -1, got {side!r}')
    v_plus, v_minus = weyl_vectors(op, z, method=method)
    if sign > 0:
        return _real_if_real(z, -v_plus[0] / v_plus[1])
    return _real_if_real(z, v_minus[0] / v_minus[1])


def _resolvent_entries(op: JacobiOperator, z, method=None):
    (xp, yp), (xm, ym) = weyl_vectors(op, z, method=method)
    a0 = op.a_at(0)
    D = xp * ym - xm * yp
    r00 = yp * ym / (a0 ** 2 * D)
    r11 = xp * xm / D
    r10 = xp * ym / (a0 * D)
    return r00, r11, r10


def green_diag(op: JacobiOperator, z, n: int = 0, method=None):
    """ r(n, n; z), computed as r(0, 0) of the n-shifted operator. """
    r00, _, _ = _resolvent_entries(op.shift(n), z, method=method)
    return _real_if_real(z, r00)


def green_r11(op: JacobiOperator, z, method=None):
    """ r(1, 1; z) = m_+ m_- / (m_+ + m_-). """
    m_plus = weyl_m(op, z, +1, method=method)
    m_minus = weyl_m(op, z, -1, method=method)
    return _real_if_real(z, m_plus * m_minus / (m_plus + m_minus))


def green_offdiag(op: JacobiOperator, z, method=None):
    """ r(1, 0; z) = u_+(1) u_-(0) / W(u_-, u_+). """
    _, _, r10 = _resolvent_entries(op, z, method=method)
    return _real_if_real(z, r10)


def m_matrix(op: JacobiOperator, z, method=None) -> np.ndarray:
    """ The Weyl M-matrix [[r(1,1), r(1,0)], [r(0,1), r(0,0)]]. """
    r00, r11, r10 = _resolvent_entries(op, z, method=method)
    dtype = np.float64 if np.isrealobj(z) else np.complex128
    M = np.array([[r11, r10], [r10, r00]])
    return np.real(M).astype(dtype) if dtype == np.float64 else M.astype(dtype)
