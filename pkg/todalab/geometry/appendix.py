"""
Density of states, Lyapunov exponents and the identities linking them to the
equilibrium measure of the spectrum.
"""
import numpy as np
from numba import njit
from scipy.linalg import eigvalsh_tridiagonal

from todalab.error import DomainError
from todalab.geometry.equilibrium import EquilibriumData, equilibrium_cdf
from todalab.jacobi.operator import JacobiOperator

RENORMALIZE_EVERY = 16


def truncation_eigenvalues(op: JacobiOperator, N: int) -> np.ndarray:
    """ Eigenvalues of the N x N truncation to sites 0 .. N - 1. """
    if N < 2:
        raise DomainError(f'N must be at least 2, got {N}')
    sites = np.arange(N)
    return eigvalsh_tridiagonal(op.b_at(sites), op.a_at(sites[:-1]))


def density_of_states(op: JacobiOperator, N: int, grid) -> np.ndarray:
    """ k(x) = #{eigenvalues <= x} / N of the N x N truncation, on ``grid``. """
    if N < 500:
        raise DomainError(f'N must be at least 500, got {N}')
    eigenvalues = truncation_eigenvalues(op, N)
    return np.searchsorted(eigenvalues, np.asarray(grid, dtype=np.float64), side='right') / N


def dos_vs_equilibrium(op: JacobiOperator, geo: EquilibriumData, N: int, grid) -> float:
    """ sup over the grid of |k(x) - rho_E((-inf, x])|. """
    k = density_of_states(op, N, grid)
    return float(np.max(np.abs(k - equilibrium_cdf(geo, np.asarray(grid, dtype=np.float64)))))


@njit(cache=True)
def _log_growth(a, b, x, n_steps, every):
    """ Sum of the logarithms of the norms removed while iterating the one-step maps. """
    period = a.shape[0]
    u0 = 1.
    u1 = 0.7548776662466927
    total = 0.
    for n in range(1, n_steps + 1):
        i = n % period
        im = (n - 1) % period
        u2 = ((x - b[i]) * u1 - a[im] * u0) / a[i]
        u0 = u1
        u1 = u2
        if n % every == 0 or n == n_steps:
            norm = np.sqrt(u0 * u0 + u1 * u1)
            total += np.log(norm)
            u0 /= norm
            u1 /= norm
    return total


def lyapunov_exponent(op: JacobiOperator, x: float, n_steps: int = 100000) -> float:
    """ (1/n) log ||T(0, n)(x) v|| for a fixed generic start vector, renormalised every 16 steps. """
    if n_steps < 1:
        raise DomainError(f'n_steps must be positive, got {n_steps}')
    if op.is_periodic:
        a, b = np.array(op.a), np.array(op.b)
    else:
        sites = np.arange(n_steps + 1)
        a, b = op.a_at(sites), op.b_at(sites)
    return float(_log_growth(a, b, float(x), int(n_steps), RENORMALIZE_EVERY) / n_steps)


def thouless_residual(geo: EquilibriumData, eigenvalues, grid) -> np.ndarray:
    """ (1/N) sum_i log|lambda_i - x| - log C(E) on the grid, with dk the empirical measure
    of the eigenvalues. """
    eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
    grid = np.asarray(grid, dtype=np.float64)
    potential = np.mean(np.log(np.abs(eigenvalues[None, :] - grid[:, None])), axis=1)
    return potential - np.log(geo.capacity)


def thouless_check(geo: EquilibriumData, eigenvalues, grid) -> float:
    """ sup of |thouless_residual| over the grid points lying on E. """
    grid = np.asarray(grid, dtype=np.float64)
    on_E = grid[geo.E.contains(grid)]
    if on_E.size == 0:
        return 0.
    return float(np.max(np.abs(thouless_residual(geo, eigenvalues, on_E))))


def geometric_mean(op: JacobiOperator, n: int = None) -> float:
    """ (a_0 a_1 ... a_{n-1})^(1/n); one period for periodic operators by default. """
    if n is None:
        n = op.period if op.is_periodic else op.size
    return float(np.exp(np.mean(np.log(op.a_at(np.arange(n))))))
