"""
The Toda lattice in Flaschka variables,

    da_n/dt = a_n (b_{n+1} - b_n),    db_n/dt = 2 (a_n^2 - a_{n-1}^2),

equivalently dJ/dt = [P, J].
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from todalab.error import DimensionError, DomainError
from todalab.jacobi.operator import JacobiOperator, lax_P_apply
from todalab.np.ode import DormandPrince45


@dataclass(frozen=True)
class TodaState:
    op: JacobiOperator
    t: float = 0.


def toda_rhs(op: JacobiOperator) -> Tuple[np.ndarray, np.ndarray]:
    a, b = op.a, op.b
    if op.is_periodic:
        b_next = np.roll(b, -1)
        a_prev = np.roll(a, 1)
    else:
        # constant extension outside the window
        b_next = np.concatenate([b[1:], b[-1:]])
        a_prev = np.concatenate([a[:1], a[:-1]])
    da = a * (b_next - b)
    db = 2. * (a ** 2 - a_prev ** 2)
    return da, db


def _positive_a(n):
    return lambda y: bool(np.all(y[:n] > 0))


def _unchecked(op, y):
    # stages only need a > 0, which the guard has already enforced
    return JacobiOperator(y[:op.size], y[op.size:], topology=op.topology, n_min=op.n_min)


class TodaFlow(object):
    """ Integrates the lattice from a fixed initial operator.

    Every query integrates afresh from t0, so results depend only on (op0, t0, tol) and
    the requested times.
    """

    def __init__(self, op0: JacobiOperator, tol=1e-10, t0=0.):
        if tol <= 0:
            raise DomainError(f'tol must be positive, got {tol}')
        self.op0 = op0
        self.t0 = float(t0)
        self.tol = tol

    def _fun(self):
        op0 = self.op0

        def fun(t, y):
            da, db = toda_rhs(_unchecked(op0, y))
            return np.concatenate([da, db])

        return fun

    def states(self, times: Sequence[float]) -> np.ndarray:
        times = np.asarray(times, dtype=np.float64)
        if not np.all(np.isfinite(times)):
            raise DomainError('integration times must be finite')
        solver = DormandPrince45(self._fun(), rtol=self.tol, atol=self.tol, guard=_positive_a(self.op0.size))
        return solver.integrate(self.t0, self.op0.state(), times)

    def operators(self, times: Sequence[float]):
        return [self.op0.from_state(y) for y in self.states(times)]

    def at(self, t: float) -> JacobiOperator:
        return self.operators([t])[0]


def integrate_toda(state: TodaState, t_target: float, tol: float) -> TodaState:
    flow = TodaFlow(state.op, tol=tol, t0=state.t)
    return TodaState(op=flow.at(t_target), t=float(t_target))


def propagate_solutions(op: JacobiOperator, solutions: Sequence[np.ndarray], n_min: int,
                        times: Sequence[float], tol: float):
    """ Transport sequences by du/dt = P(t) u jointly with the lattice.

    The lattice is flowed in its own topology; every sequence lives on the window of sites
    n_min .. n_min + len - 1 where P uses the lattice coefficients and u is extended by
    zero outside the window.

    Returns:
        (operators, solutions) with operators[i] the lattice at times[i] and
        solutions[i][k] the k-th transported sequence at times[i].
    """
    solutions = [np.asarray(u, dtype=np.float64) for u in solutions]
    lengths = {u.size for u in solutions}
    if len(lengths) != 1:
        raise DimensionError('all transported sequences must share one window')
    width = lengths.pop()
    sites = np.arange(n_min, n_min + width)
    n = op.size
    n_sol = len(solutions)

    def fun(t, y):
        lattice = _unchecked(op, y[:2 * n])
        da, db = toda_rhs(lattice)
        window = JacobiOperator.window(lattice.a_at(sites), lattice.b_at(sites), n_min=n_min)
        us = y[2 * n:].reshape(n_sol, width)
        dus = np.stack([lax_P_apply(window, u) for u in us])
        return np.concatenate([da, db, dus.reshape(-1)])

    y0 = np.concatenate([op.state()] + solutions)
    solver = DormandPrince45(fun, rtol=tol, atol=tol, guard=_positive_a(n))
    ys = solver.integrate(0., y0, times)
    ops = [op.from_state(y[:2 * n]) for y in ys]
    sols = [y[2 * n:].reshape(n_sol, width) for y in ys]
    return ops, sols


def flaschka(p, q, drift: float = 0.) -> Tuple[np.ndarray, np.ndarray]:
    """ a_n = exp(-(q_{n+1} - q_n)/2)/2, b_n = -p_n/2 on a closed chain with q_{k+1} = q_1 + drift. """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise DimensionError('p and q must be 1-d sequences of equal length')
    q_next = np.concatenate([q[1:], q[:1] + drift])
    a = 0.5 * np.exp(-0.5 * (q_next - q))
    b = -0.5 * p
    return a, b


def inverse_flaschka(a, b, q0: float) -> Tuple[np.ndarray, np.ndarray]:
    """ Telescopes q_{n+1} = q_n - 2 log(2 a_n) from q_0 and sets p_n = -2 b_n. """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError('a and b must be 1-d sequences of equal length')
    if np.any(a <= 0):
        raise DomainError('inverse_flaschka requires a_n > 0')
    steps = -2. * np.log(2. * a[:-1])
    q = q0 + np.concatenate([[0.], np.cumsum(steps)])
    p = -2. * b
    return p, q


def chain_drift(a) -> float:
    """ q_{k+1} - q_1 of the closed chain whose Flaschka a-variables are ``a``. """
    a = np.asarray(a, dtype=np.float64)
    if np.any(a <= 0):
        raise DomainError('chain_drift requires a_n > 0')
    return float(-2. * np.sum(np.log(2. * a)))


def hamiltonian(p, q, drift: float = 0.) -> float:
    """ H = sum p_n^2 / 2 + (1/2) sum_n [e^{-(q_{n+1} - q_n)} + e^{-(q_n - q_{n-1})}].

    The chain is closed by q_{n+k} = q_n + drift, so every bond is counted once from each
    of its two ends and H = sum p^2/2 + sum over bonds of e^{-(q_{n+1} - q_n)}.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise DimensionError('p and q must be 1-d sequences of equal length')
    q_next = np.concatenate([q[1:], q[:1] + drift])
    q_prev = np.concatenate([q[-1:] - drift, q[:-1]])
    right = np.exp(-(q_next - q))
    left = np.exp(-(q - q_prev))
    return float(0.5 * np.sum(p ** 2) + 0.5 * np.sum(right + left))
