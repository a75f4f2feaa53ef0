"""
Trace formulas recovering (a_0, b_0) from Dirichlet angles.

    Q(phi) = (1/2) (E_lo + E_hi + sum_j (E_j^- + E_j^+ - 2 mu_j)) = b_0

    P(phi) = C(E) exp((1/2) sum_j [sigma_j g(mu_j) - sigma_j^+ g(mu_j^+)]) = a_0

where g is the Green's function of E and phi^+ the angles translated by the shift
character alpha, i.e. the divisor at the next site.
"""
import numpy as np

from todalab.error import DependencyError
from todalab.geometry.abel import divisor_sequence, shift_character, translate_divisor
from todalab.geometry.equilibrium import EquilibriumData, green_function
from todalab.jacobi.operator import JacobiOperator
from todalab.spectral.dirichlet import divisor_from_angles
from todalab.spectral.gapset import GapSet


def trace_Q(E: GapSet, phi) -> float:
    d = divisor_from_angles(E, phi)
    return float(0.5 * (E.E_lo + E.E_hi + np.sum(E.lefts + E.rights - 2. * d.mu)))


def _signed_green(E, geo, phi) -> float:
    d = divisor_from_angles(E, phi)
    total = 0.
    for mu, sigma in zip(d.mu, d.sigma):
        if sigma != 0:
            total += sigma * green_function(geo, mu)
    return total


def _trace_P_pair(E, geo, phi, phi_next) -> float:
    return float(geo.capacity * np.exp(0.5 * (_signed_green(E, geo, phi) - _signed_green(E, geo, phi_next))))


def trace_P(E: GapSet, phi, geometry: EquilibriumData = None, alpha=None) -> float:
    """ a_0 from the angles, their translate by ``alpha`` and the Green's function of E.

    Raises:
        DependencyError: no equilibrium data was supplied.
    """
    if geometry is None:
        raise DependencyError('trace_P needs the equilibrium data of the gap set')
    if E.n_gaps == 0:
        return float(geometry.capacity)
    if alpha is None:
        alpha = shift_character(E, geometry)
    phi_next = translate_divisor(E, geometry, phi, alpha)
    return _trace_P_pair(E, geometry, phi, phi_next)


def reconstruct_operator(E: GapSet, geometry: EquilibriumData, phi0, n_sites: int) -> JacobiOperator:
    """ The window operator with a_n = P(phi(n)), b_n = Q(phi(n)) for n = 0 .. n_sites - 1,
    where phi(n) are the translates of ``phi0`` by n alpha. """
    if geometry is None:
        raise DependencyError('reconstruct_operator needs the equilibrium data of the gap set')
    if E.n_gaps == 0:
        return JacobiOperator.window(np.full(n_sites, geometry.capacity), np.full(n_sites, trace_Q(E, [])))
    angles = divisor_sequence(E, geometry, phi0, n_sites)
    a = [_trace_P_pair(E, geometry, angles[n], angles[n + 1]) for n in range(n_sites)]
    b = [trace_Q(E, angles[n]) for n in range(n_sites)]
    return JacobiOperator.window(a, b)
