"""
Jacobi operators (Ju)_n = a_n u_{n+1} + b_n u_n + a_{n-1} u_{n-1} on two lattice topologies.

* periodic(p): the stored a, b have length p and every index is taken mod p.
* window(n_min): the stored a, b describe sites n_min .. n_min + len - 1; outside the
  window a and b are extended by their boundary values and sequences u by zero.
"""
from typing import Optional

import numpy as np

from todalab.error import DimensionError, DomainError, UnsupportedTopologyError

PERIODIC = 'periodic'
WINDOW = 'window'


class JacobiOperator(object):
    def __init__(self, a, b, topology=PERIODIC, n_min=0):
        a = np.array(a, dtype=np.float64).reshape(-1)
        b = np.array(b, dtype=np.float64).reshape(-1)
        if a.shape != b.shape or a.size == 0:
            raise DimensionError(f'a and b must be non-empty and of equal length, got {a.size} and {b.size}')
        if topology not in (PERIODIC, WINDOW):
            raise DomainError(f'Unknown topology {topology!r}')
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise DomainError('a and b must be bounded (finite)')
        if np.any(a <= 0):
            raise DomainError(f'a_n must be positive, got min(a) = {np.min(a):.17g}')
        a.setflags(write=False)
        b.setflags(write=False)
        self.a = a
        self.b = b
        self.topology = topology
        self.n_min = int(n_min) if topology == WINDOW else 0

    @classmethod
    def periodic(cls, a, b):
        return cls(a, b, topology=PERIODIC)

    @classmethod
    def window(cls, a, b, n_min=0):
        return cls(a, b, topology=WINDOW, n_min=n_min)

    @classmethod
    def free(cls, period=1):
        return cls.periodic(np.full(period, 0.5), np.zeros(period))

    @property
    def is_periodic(self):
        return self.topology == PERIODIC

    @property
    def period(self):
        if not self.is_periodic:
            raise UnsupportedTopologyError('period is only defined for periodic operators')
        return self.a.size

    @property
    def size(self):
        return self.a.size

    @property
    def n_max(self):
        return self.n_min + self.a.size - 1

    def __repr__(self):
        if self.is_periodic:
            return f'JacobiOperator.periodic(a={self.a.tolist()}, b={self.b.tolist()})'
        return f'JacobiOperator.window(a={self.a.tolist()}, b={self.b.tolist()}, n_min={self.n_min})'

    def __eq__(self, other):
        return isinstance(other, JacobiOperator) and self.topology == other.topology and \
               self.n_min == other.n_min and np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)

    def _storage_index(self, n):
        n = np.asarray(n, dtype=np.int64)
        if self.is_periodic:
            return np.mod(n, self.a.size)
        return np.clip(n - self.n_min, 0, self.a.size - 1)

    def a_at(self, n):
        return self.a[self._storage_index(n)]

    def b_at(self, n):
        return self.b[self._storage_index(n)]

    def with_coefficients(self, a, b):
        return JacobiOperator(a, b, topology=self.topology, n_min=self.n_min)

    def shift(self, k: int) -> 'JacobiOperator':
        """ The operator with a'_n = a_{n+k}, b'_n = b_{n+k}. """
        k = int(k)
        if self.is_periodic:
            return JacobiOperator.periodic(np.roll(self.a, -k), np.roll(self.b, -k))
        return JacobiOperator.window(self.a, self.b, n_min=self.n_min - k)

    def tile(self, copies: int) -> 'JacobiOperator':
        """ The same periodic operator described over ``copies`` periods. """
        if not self.is_periodic:
            raise UnsupportedTopologyError('tile is only defined for periodic operators')
        return JacobiOperator.periodic(np.tile(self.a, copies), np.tile(self.b, copies))

    def state(self) -> np.ndarray:
        """ The stacked (a, b) vector the Toda flow acts on. """
        return np.concatenate([self.a, self.b])

    def from_state(self, y) -> 'JacobiOperator':
        n = self.a.size
        return self.with_coefficients(y[:n], y[n:])

    def dense(self, n_from: int, n_to: int) -> np.ndarray:
        """ The (n_to - n_from + 1)-square truncation to sites n_from .. n_to. """
        sites = np.arange(n_from, n_to + 1)
        off = self.a_at(sites[:-1])
        return np.diag(self.b_at(sites)) + np.diag(off, 1) + np.diag(off, -1)

    def bloch_matrix(self, theta: float = 0.) -> np.ndarray:
        """ The p x p realization on Floquet sequences u_{n+p} = e^{i theta} u_n.

        Real symmetric for theta in {0, pi}, Hermitian otherwise. For p = 1 the two
        wrap-around terms fall on the single diagonal entry.
        """
        p = self.period
        phase = np.exp(1j * theta)
        if np.isclose(phase.imag, 0., atol=1e-15):
            phase = phase.real
        dtype = np.complex128 if np.iscomplexobj(phase) else np.float64
        J = np.diag(self.b).astype(dtype)
        for n in range(p - 1):
            J[n, n + 1] += self.a[n]
            J[n + 1, n] += self.a[n]
        J[p - 1, 0] += self.a[p - 1] * phase
        J[0, p - 1] += self.a[p - 1] * np.conj(phase)
        return J

    def lax_P_bloch(self, theta: float = 0.) -> np.ndarray:
        """ The p x p realization of P, (Pu)_n = a_n u_{n+1} - a_{n-1} u_{n-1}. """
        p = self.period
        phase = np.exp(1j * theta)
        if np.isclose(phase.imag, 0., atol=1e-15):
            phase = phase.real
        dtype = np.complex128 if np.iscomplexobj(phase) else np.float64
        P = np.zeros(shape=(p, p), dtype=dtype)
        for n in range(p - 1):
            P[n, n + 1] += self.a[n]
            P[n + 1, n] -= self.a[n]
        P[p - 1, 0] += self.a[p - 1] * phase
        P[0, p - 1] -= self.a[p - 1] * np.conj(phase)
        return P


def _check_sequence(op: JacobiOperator, u, name='u') -> np.ndarray:
    u = np.asarray(u)
    if u.ndim != 1 or u.size != op.size:
        raise DimensionError(f'{name} must have length {op.size} for {op.topology} topology, got shape {u.shape}')
    return u


def _neighbours(op: JacobiOperator, u):
    """ (u_{n+1}, u_{n-1}) over the stored index set. """
    if op.is_periodic:
        return np.roll(u, -1), np.roll(u, 1)
    zero = np.zeros(1, dtype=u.dtype)
    return np.concatenate([u[1:], zero]), np.concatenate([zero, u[:-1]])


def _a_previous(op: JacobiOperator):
    if op.is_periodic:
        return np.roll(op.a, 1)
    return np.concatenate([op.a[:1], op.a[:-1]])


def apply_jacobi(op: JacobiOperator, u) -> np.ndarray:
    u = _check_sequence(op, u)
    u_next, u_prev = _neighbours(op, u)
    return op.a * u_next + op.b * u + _a_previous(op) * u_prev


def lax_P_apply(op: JacobiOperator, u) -> np.ndarray:
    u = _check_sequence(op, u)
    u_next, u_prev = _neighbours(op, u)
    return op.a * u_next - _a_previous(op) * u_prev


def lax_P_restriction_residual(op: JacobiOperator, u, z, interior: Optional[slice] = None) -> float:
    """ max |Pu - (2aSu - (z - b)u)| for a sequence with Ju = zu, (Su)_n = u_{n+1}.

    On windowed operators the two boundary sites are excluded because zero extension
    breaks the eigen-equation there.
    """
    u = _check_sequence(op, u)
    u_next, _ = _neighbours(op, u)
    residual = np.abs(lax_P_apply(op, u) - (2. * op.a * u_next - (z - op.b) * u))
    if interior is None:
        interior = slice(None) if op.is_periodic else slice(1, -1)
    return float(np.max(residual[interior])) if residual[interior].size > 0 else 0.


def solve_recurrence(op: JacobiOperator, z, u0, u1, n_from: int, n_to: int) -> np.ndarray:
    """ The solution of Ju = zu with u(0) = u0, u(1) = u1 on sites n_from .. n_to.

    Requires n_from <= 0 and n_to >= 1. Entry i of the result is u(n_from + i).
    """
    assert n_from <= 0 < 1 <= n_to
    dtype = np.result_type(np.asarray(z), np.asarray(u0), np.asarray(u1), np.float64)
    u = np.zeros(n_to - n_from + 1, dtype=dtype)
    offset = -n_from
    u[offset] = u0
    u[offset + 1] = u1
    for n in range(1, n_to):
        u[offset + n + 1] = ((z - op.b_at(n)) * u[offset + n] - op.a_at(n - 1) * u[offset + n - 1]) / op.a_at(n)
    for n in range(0, n_from, -1):
        u[offset + n - 1] = ((z - op.b_at(n)) * u[offset + n] - op.a_at(n) * u[offset + n + 1]) / op.a_at(n - 1)
    return u


def wronskian(op: JacobiOperator, u, v, site: int, n_min: int = 0):
    """ W = a_site (u(site) v(site+1) - u(site+1) v(site)); u, v are indexed from n_min. """
    i = site - n_min
    if i < 0 or i + 1 >= min(len(u), len(v)):
        raise DimensionError(f'sequences do not cover sites {site}, {site + 1}')
    return op.a_at(site) * (u[i] * v[i + 1] - u[i + 1] * v[i])


def conserved_traces(op: JacobiOperator, k_max: int) -> np.ndarray:
    """ Per-site traces <J^k>, k = 1 .. k_max, of a periodic operator.

    This is not tr(J^k) / p of the literal p x p matrix, whose wrap-around entries add
    spurious closed paths once k >= p. The operator is tiled into a periodic window of
    ``ceil((k_max + 1) / p)`` periods, more than k_max sites, so no closed path of length k
    wraps the ring. The trace of that window divided by its size equals the per-site
    average of the infinite lattice.
    """
    if not op.is_periodic:
        raise UnsupportedTopologyError('conserved_traces requires a periodic operator')
    p = op.period
    if not 1 <= k_max <= 2 * p:
        raise DomainError(f'k_max must lie in [1, {2 * p}], got {k_max}')
    copies = int(np.ceil((k_max + 1) / p))
    J = op.tile(copies).bloch_matrix(0.)
    L = J.shape[0]
    traces = np.empty(k_max, dtype=np.float64)
    power = np.eye(L)
    for k in range(k_max):
        power = power @ J
        traces[k] = np.trace(power) / L
    return traces
