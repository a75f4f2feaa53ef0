"""
Finite-gap approximation of the angle flow.

E^N keeps the N largest gaps of E. The comparison flow keeps every angle: the kept angles
move under Psi of E^N evaluated at the kept angles alone, the remaining ones under the
full Psi of E.
"""
import numpy as np
import pandas as pd

from todalab.flow.craig import craig_report
from todalab.flow.dubrovin import integrate_field
from todalab.flow.psi import psi, torus_distance
from todalab.logx import log
from todalab.np.functional import fit_line
from todalab.spectral.gapset import GapSet


def kept_gaps(E: GapSet, N: int) -> np.ndarray:
    """ Positions (in E's left-to-right order) of the N largest gaps, in increasing order. """
    if N > E.n_gaps:
        log(f'truncation level {N} exceeds the {E.n_gaps} gaps of the set; using {E.n_gaps}', color='yellow')
        N = E.n_gaps
    if N < 0:
        raise ValueError(f'N must be nonnegative, got {N}')
    return np.sort(E.size_order()[:N])


def truncate_gapset(E: GapSet, N: int) -> GapSet:
    return E.subset(kept_gaps(E, N))


def truncated_field(E: GapSet, N: int):
    kept = kept_gaps(E, N)
    if kept.size == E.n_gaps:
        return lambda phi: psi(E, phi)
    E_N = E.subset(kept)

    def field(phi):
        out = psi(E, phi)
        out[kept] = psi(E_N, phi[kept])
        return out

    return field


def approximation_experiment(E: GapSet, f, N_list, t_grid, tol: float = 1e-10) -> pd.DataFrame:
    """ Distance between the flow on E and the truncated flows, started from the same angles ``f``.

    For every N the table holds the sup over the grid of the torus distance and the fit
    log d(t) ~ log K_N + slope * t over the grid points t > 0 with d(t) > 0. The
    exponential rate m = 2 L log 2 from the Craig report of E is carried along.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    full = integrate_field(lambda phi: psi(E, phi), f, t_grid, tol)
    rate = craig_report(E).exponential_rate
    rows = []
    for N in N_list:
        approx = integrate_field(truncated_field(E, N), f, t_grid, tol)
        distance = np.array([torus_distance(E, approx[i], full[i]) for i in range(t_grid.size)])
        usable = (t_grid > 0) & (distance > 0)
        if np.count_nonzero(usable) >= 2:
            slope, intercept, _ = fit_line(t_grid[usable], np.log(distance[usable]))
            K = float(np.exp(intercept))
        else:
            slope, K = np.nan, 0.
        rows.append(dict(N=int(min(N, E.n_gaps)), sup_distance=float(np.max(distance)), K_N=K, slope=float(slope),
                         exponential_rate=rate))
    return pd.DataFrame(rows)
