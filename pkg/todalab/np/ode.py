"""
Explicit adaptive Runge-Kutta integration.

Only non-stiff problems are handled. The Toda lattice, the solution transport and the
Dubrovin angle flow all have bounded, smooth right-hand sides on the time spans used here.
"""
from typing import Callable, Optional

import numpy as np

from todalab.error import StiffnessError

UNDERFLOW_FRACTION = 1e-12


class ExplicitRungeKutta(object):
    """Base class of embedded explicit Runge-Kutta pairs with step size control.

    Subclasses provide the extended Butcher table ``BT`` (row i holds the coefficients of
    stage i + 1), the propagating weights ``B``, the local truncation error weights ``TR``
    (propagating minus embedded), the stage times ``eval_stages`` and the order ``m`` of
    the embedded method.

    Args:
        fun: right hand side ``f(t, y) -> dy``.
        rtol: relative tolerance of the local error.
        atol: absolute tolerance of the local error.
        guard: optional predicate on a state; a step with any stage or final state that
            fails the guard is rejected and the step size halved.
        callback: optional ``callback(t_old, y_old, t_new, y_new)`` run on accepted steps.
        max_steps: hard cap on attempted steps per ``integrate`` call.
    """

    s = 0
    m = 0
    eval_stages = []
    BT = {}
    B = []
    TR = []

    def __init__(self, fun: Callable, rtol=1e-10, atol=1e-10, guard: Optional[Callable] = None,
                 callback: Optional[Callable] = None, max_steps=1000000, safety=0.9,
                 min_factor=0.2, max_factor=5.0):
        assert rtol > 0 and atol > 0
        self.fun = fun
        self.rtol = rtol
        self.atol = atol
        self.guard = guard
        self.callback = callback
        self.max_steps = max_steps
        self.safety = safety
        self.min_factor = min_factor
        self.max_factor = max_factor
        self.h = None
        self.n_accepted = 0
        self.n_rejected = 0

    def _error_norm(self, err, y, y_new):
        scale = self.atol + self.rtol * np.maximum(np.abs(y), np.abs(y_new))
        return float(np.sqrt(np.mean(np.abs(err / scale) ** 2))) if err.size > 0 else 0.0

    def _initial_step(self, t, y, f0, span):
        scale = self.atol + self.rtol * np.abs(y)
        d0 = np.sqrt(np.mean(np.abs(y / scale) ** 2)) if y.size > 0 else 0.
        d1 = np.sqrt(np.mean(np.abs(f0 / scale) ** 2)) if y.size > 0 else 0.
        if d0 < 1e-5 or d1 < 1e-5:
            h = 1e-6
        else:
            h = 0.01 * d0 / d1
        return min(h, abs(span))

    def step(self, t, y, h, f0):
        """ One attempted step. Returns (y_new, error_estimate, stages_ok). """
        K = [f0]
        ok = True
        for i in range(self.s - 1):
            coeffs = self.BT[i]
            y_stage = y + h * sum(c * k for c, k in zip(coeffs, K) if c != 0)
            if self.guard is not None and not self.guard(y_stage):
                ok = False
                return y_stage, None, ok
            K.append(self.fun(t + self.eval_stages[i + 1] * h, y_stage))
        y_new = y + h * sum(b * k for b, k in zip(self.B, K) if b != 0)
        if self.guard is not None and not self.guard(y_new):
            return y_new, None, False
        err = h * sum(e * k for e, k in zip(self.TR, K) if e != 0)
        return y_new, err, ok

    def integrate(self, t0, y0, t_eval):
        """ Integrate from ``t0`` and return the states at every time of ``t_eval``.

        ``t_eval`` must be monotone in the direction of integration; steps are clipped to
        land on every requested time.
        """
        t_eval = np.atleast_1d(np.asarray(t_eval, dtype=np.float64))
        y = np.array(y0, copy=True)
        out = np.empty(shape=(len(t_eval),) + y.shape, dtype=y.dtype)
        if len(t_eval) == 0:
            return out
        span = float(t_eval[-1] - t0)
        direction = 1.0 if span >= 0 else -1.0
        assert np.all(direction * np.diff(np.concatenate([[t0], t_eval])) >= 0), 't_eval must be monotone'
        h_min = UNDERFLOW_FRACTION * abs(span)

        t = float(t0)
        f0 = self.fun(t, y)
        if not self.h and span != 0:
            self.h = self._initial_step(t, y, f0, span)
        n_steps = 0
        for i, t_target in enumerate(t_eval):
            while direction * (t_target - t) > 0:
                h = min(abs(self.h), abs(t_target - t))
                if n_steps >= self.max_steps:
                    raise StiffnessError(t, h, h_min)
                n_steps += 1
                y_new, err, ok = self.step(t, y, direction * h, f0)
                if not ok:
                    self.n_rejected += 1
                    self.h = 0.5 * h
                    if self.h < h_min:
                        raise StiffnessError(t, self.h, h_min)
                    continue
                err_norm = self._error_norm(err, y, y_new)
                if err_norm <= 1.0:
                    t_new = t_target if h == abs(t_target - t) else t + direction * h
                    if self.callback is not None:
                        self.callback(t, y, t_new, y_new)
                    t, y = t_new, y_new
                    f0 = self.fun(t, y)
                    self.n_accepted += 1
                    factor = self.max_factor if err_norm == 0 else \
                        min(self.max_factor, self.safety * err_norm ** (-1.0 / (self.m + 1)))
                    # a step shortened to hit an output time keeps the previous step size
                    self.h = max(abs(self.h), h * factor) if h < abs(self.h) else h * factor
                else:
                    self.n_rejected += 1
                    factor = max(self.min_factor, self.safety * err_norm ** (-1.0 / (self.m + 1)))
                    self.h = h * factor
                    if self.h < h_min:
                        raise StiffnessError(t, self.h, h_min)
            out[i] = y
        return out


class DormandPrince45(ExplicitRungeKutta):
    """Dormand-Prince 5(4) pair. Seven stages (first same as last), 5th order propagation
    with an embedded 4th order error estimate.
    """

    #number of stages in RK scheme
    s = 7

    #order of the embedded method
    m = 4

    #intermediate evaluation times
    eval_stages = [0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0]

    #extended butcher table
    BT = {
        0: [1 / 5],
        1: [3 / 40, 9 / 40],
        2: [44 / 45, -56 / 15, 32 / 9],
        3: [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
        4: [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
        5: [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
    }

    B = [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0]

    #coefficients for local truncation error estimate
    TR = [71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]


def solve_ivp(fun, t0, y0, t_eval, tol, guard=None, callback=None):
    """ Integrate ``y' = fun(t, y)`` with Dormand-Prince at rtol = atol = tol. """
    solver = DormandPrince45(fun, rtol=tol, atol=tol, guard=guard, callback=callback)
    return solver.integrate(t0, y0, t_eval)
