"""
Integration of the Dubrovin flow d phi / dt = Psi(phi).

The integrator runs on lifted (unwrapped) angles; trajectories carry both the lifted
angles and their reduction to [0, 2 pi).
"""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from todalab.error import DomainError, MonotonicityError
from todalab.flow.psi import psi, mu_of_angles
from todalab.np.functional import fit_line, wrap_angle
from todalab.np.ode import DormandPrince45
from todalab.spectral.dirichlet import divisor_from_angles
from todalab.spectral.gapset import GapSet


@dataclass(frozen=True)
class DubrovinTrajectory:
    E: GapSet
    times: np.ndarray
    lifted: np.ndarray

    @property
    def angles(self) -> np.ndarray:
        return wrap_angle(self.lifted)

    @property
    def mu(self) -> np.ndarray:
        return mu_of_angles(self.E, self.lifted)

    def divisor(self, i: int):
        return divisor_from_angles(self.E, self.lifted[i])

    def crossing_times(self, j: int, levels) -> np.ndarray:
        """ Times at which the lifted angle phi_j passes the given levels (phi_j is increasing). """
        return np.interp(levels, self.lifted[:, j], self.times, left=np.nan, right=np.nan)


def _monotonicity_check(t_old, y_old, t_new, y_new):
    if t_new > t_old and not np.all(y_new > y_old):
        j = int(np.argmin(y_new - y_old))
        raise MonotonicityError(f'phi_{j} did not increase on the step [{t_old:.17g}, {t_new:.17g}]: '
                                f'{y_old[j]:.17g} -> {y_new[j]:.17g}')


def integrate_field(field, phi0, times, tol) -> np.ndarray:
    """ Lifted solution of d phi / dt = field(phi) from t = 0, sampled at ``times``. """
    solver = DormandPrince45(lambda t, y: field(y), rtol=tol, atol=tol, callback=_monotonicity_check)
    return solver.integrate(0., np.asarray(phi0, dtype=np.float64), times)


def integrate_dubrovin(E: GapSet, phi0, t_target: float, tol: float = 1e-10, times=None) -> DubrovinTrajectory:
    """ Integrate the angle flow on the torus of E.

    Args:
        E: the finite-gap set.
        phi0: initial angles.
        t_target: final time.
        tol: relative and absolute local error tolerance.
        times: output times in [0, t_target]; defaults to 0 and t_target.

    Raises:
        MonotonicityError: some angle failed to increase on an accepted step.
    """
    if tol <= 0:
        raise DomainError(f'tol must be positive, got {tol}')
    phi0 = np.asarray(phi0, dtype=np.float64).reshape(-1)
    if phi0.size != E.n_gaps:
        raise DomainError(f'phi0 has {phi0.size} entries but the gap set has {E.n_gaps} gaps')
    times = np.array([0., t_target] if times is None else times, dtype=np.float64)
    if phi0.size == 0:
        return DubrovinTrajectory(E=E, times=times, lifted=np.zeros((times.size, 0)))
    lifted = integrate_field(lambda y: psi(E, y), phi0, times, tol)
    return DubrovinTrajectory(E=E, times=times, lifted=lifted)


def circulation_period(E: GapSet) -> float:
    """ T = integral over one turn of d phi / Psi(phi); defined for a single gap. """
    if E.n_gaps != 1:
        raise DomainError(f'the circulation period is defined for one gap, got {E.n_gaps}')
    value, _ = quad(lambda phi: 1. / psi(E, [phi])[0], 0., 2. * np.pi, epsabs=1e-13, epsrel=1e-13, limit=200)
    return value


def edge_dwell_times(traj: DubrovinTrajectory, j: int, delta: float) -> np.ndarray:
    """ Time phi_j spends within angle distance ``delta`` of each edge point k pi it crosses.

    Only crossings whose whole window [k pi - delta, k pi + delta] lies inside the sampled
    trajectory are reported.
    """
    phi = traj.lifted[:, j]
    first = int(np.ceil((phi[0] + delta) / np.pi))
    last = int(np.floor((phi[-1] - delta) / np.pi))
    edges = np.pi * np.arange(first, last + 1)
    if edges.size == 0:
        return np.zeros(0)
    return traj.crossing_times(j, edges + delta) - traj.crossing_times(j, edges - delta)


def dwell_exponent(deltas, dwell) -> float:
    """ Slope of log(dwell) against log(delta). """
    slope, _, _ = fit_line(np.log(deltas), np.log(dwell))
    return float(slope)
