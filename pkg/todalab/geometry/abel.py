"""
Harmonic measures xi_j and the Abel map of a finite-gap set.

xi_j is the harmonic measure of the part of E to the right of gap j: 0 on the bands left
of gap j, 1 on the bands right of it. Its derivative on the real axis is q_j / sqrt|R|
with q_j of degree g - 1 fixed by requiring unit flux across gap j and zero flux across
every other gap. The Abel map is

    A_j(phi) = pi sum_k sigma_k (xi_j(mu_k) - xi_j(E_k^-))   mod 2 pi.

On gap k the point mu(phi_k) corresponds to theta = pi - |phi_k| of the gap
parametrisation, so xi_j(mu_k) is a partial integral in theta.
"""
import numpy as np
from numpy.polynomial import chebyshev
from scipy.integrate import fixed_quad
from scipy.optimize import root

from todalab.error import ConvergenceError, DimensionError, DomainError
from todalab.geometry.equilibrium import EquilibriumData, PARTIAL_ORDER, interval_integrand, outer_integral, \
    partial_integral, theta_of, locate
from todalab.np.functional import TWO_PI, fit_line, unwrap_checked, wrap_angle, wrap_centered
from todalab.spectral.dirichlet import angles_from_divisor, dirichlet_data, sigma_of_angles
from todalab.spectral.gapset import GapSet

TRANSLATION_STEP = np.pi / 8
TRANSLATION_TOL = 1e-10
JACOBIAN_STEP = 1e-7
MAX_HALVINGS = 6
MIN_FIT_SAMPLES = 10


def harmonic_coefficients(geo: EquilibriumData) -> np.ndarray:
    """ Chebyshev coefficients of q_j as the columns of a (g, g) matrix. """
    g = geo.n_gaps
    if g == 0:
        return np.zeros((0, 0))
    return np.linalg.solve(geo.gap_matrix[:, :g], np.eye(g))


def _check(E: GapSet, geo: EquilibriumData):
    if geo.E != E:
        raise DomainError('the equilibrium data was computed for a different gap set')


def _gap_partials(geo: EquilibriumData, Q, k: int, theta: float) -> np.ndarray:
    """ Signed partial flux of every q_j across gap k from its left edge to s(theta). """
    if theta == 0.:
        return np.zeros(Q.shape[1])
    interval = geo.gap_interval(k)
    value, _ = fixed_quad(lambda th: interval_integrand(geo.edges, Q, interval, th), 0., theta, n=PARTIAL_ORDER)
    return np.asarray(value)


def _xi_from_partials(partials, k: int) -> np.ndarray:
    """ xi_j at a point of gap k for all j, given the signed partial fluxes. """
    j = np.arange(partials.size)
    return np.where(j > k, np.abs(partials), np.where(j < k, 1. - np.abs(partials), partials))


def xi_harmonic(E: GapSet, geo: EquilibriumData, j: int, x: float) -> float:
    _check(E, geo)
    if not 0 <= j < E.n_gaps:
        raise DomainError(f'gap index {j} out of range for {E.n_gaps} gaps')
    q = harmonic_coefficients(geo)[:, j]
    s = float(geo.to_s(x))
    where, k = locate(geo, s)
    if where == 'below':
        return abs(outer_integral(geo.edges, q, s))
    if where == 'above':
        return 1. - abs(outer_integral(geo.edges, q, s))
    if where == 'band':
        return 0. if k <= j else 1.
    interval = geo.gap_interval(k)
    partial = partial_integral(geo.edges, q, interval, theta_of(geo.edges, interval, s))
    if k < j:
        return abs(partial)
    if k > j:
        return 1. - abs(partial)
    return partial


def xi_at_infinity(geo: EquilibriumData) -> np.ndarray:
    """ xi_j(infinity), the equilibrium mass to the right of gap j. """
    return np.array([float(np.sum(geo.band_masses[j + 1:])) for j in range(geo.n_gaps)])


def _abel_sum(E, geo, phi, sigma):
    Q = harmonic_coefficients(geo)
    g = E.n_gaps
    centred = wrap_centered(phi)
    total = np.zeros(g)
    for k in range(g):
        if sigma[k] == 0:
            continue
        xi = _xi_from_partials(_gap_partials(geo, Q, k, np.pi - abs(centred[k])), k)
        # xi_j(E_k^-) is 0 for the gaps j >= k and 1 for j < k
        base = (np.arange(g) < k).astype(np.float64)
        total += sigma[k] * (xi - base)
    return np.pi * total


def abel_map(E: GapSet, geo: EquilibriumData, phi, continuous=False) -> np.ndarray:
    """ The Abel image of the angles ``phi``, in [0, 2 pi).

    With ``continuous=False`` the signs are those of the divisor, so edge points
    (sigma = 0) contribute nothing. ``continuous=True`` counts an angle at 0 with
    sigma = +1, which makes the map continuous on the whole torus. Jacobi inversion and
    frequency fits use that version.
    """
    _check(E, geo)
    phi = np.asarray(phi, dtype=np.float64).reshape(-1)
    if phi.size != E.n_gaps:
        raise DimensionError(f'angle vector has {phi.size} entries but the gap set has {E.n_gaps} gaps')
    if continuous:
        sigma = np.where(wrap_centered(phi) >= 0, 1, -1)
    else:
        sigma = sigma_of_angles(phi)
    return wrap_angle(_abel_sum(E, geo, phi, sigma))


def shift_character(E: GapSet, geo: EquilibriumData) -> np.ndarray:
    """ alpha_j = 2 pi rho_E(E to the left of gap j) mod 2 pi, the Abel-map step of one lattice shift. """
    _check(E, geo)
    return wrap_angle(TWO_PI * np.cumsum(geo.band_masses)[:E.n_gaps])


def site_angles(op, E: GapSet, sites) -> np.ndarray:
    """ Angles of the Dirichlet divisors of ``op`` at the given sites. """
    return np.array([angles_from_divisor(E, dirichlet_data(op, E, n)) for n in sites]).reshape(len(sites), E.n_gaps)


def shift_validation(op, E: GapSet, geo: EquilibriumData, n_max: int) -> float:
    """ max_n |A(phi(n + 1)) - A(phi(n)) - alpha|_T over n = 0 .. n_max. """
    alpha = shift_character(E, geo)
    if E.n_gaps == 0:
        return 0.
    images = [abel_map(E, geo, phi, continuous=True) for phi in site_angles(op, E, range(n_max + 2))]
    steps = [wrap_centered(images[n + 1] - images[n] - alpha) for n in range(n_max + 1)]
    return float(np.max(np.abs(steps)))


def _abel_jacobian(E, geo, y, h=JACOBIAN_STEP) -> np.ndarray:
    """ Central differences of the continuous Abel map with an absolute step. """
    jac = np.empty((y.size, y.size))
    for k in range(y.size):
        dy = np.zeros(y.size)
        dy[k] = h
        forward = abel_map(E, geo, y + dy, continuous=True)
        backward = abel_map(E, geo, y - dy, continuous=True)
        jac[:, k] = wrap_centered(forward - backward) / (2. * h)
    return jac


def _inversion_step(E, geo, current, target):
    residual = lambda y: wrap_centered(abel_map(E, geo, y, continuous=True) - target)
    solution = root(residual, current, jac=lambda y: _abel_jacobian(E, geo, y), method='hybr',
                    options=dict(xtol=1e-13))
    return solution.x, float(np.max(np.abs(residual(solution.x))))


def translate_divisor(E: GapSet, geo: EquilibriumData, phi, shift) -> np.ndarray:
    """ Angles phi' with A(phi') = A(phi) + shift, by continuation along the straight path
    in Abel coordinates. Returns angles in [0, 2 pi).

    A step that fails to solve is halved, at most ``MAX_HALVINGS`` times.

    Raises:
        ConvergenceError: a continuation step failed to solve to 1e-10.
    """
    _check(E, geo)
    phi = np.asarray(phi, dtype=np.float64).reshape(-1)
    if E.n_gaps == 0:
        return phi.copy()
    shift = wrap_centered(np.asarray(shift, dtype=np.float64).reshape(-1))
    start = abel_map(E, geo, phi, continuous=True)
    n_steps = max(1, int(np.ceil(np.max(np.abs(shift)) / TRANSLATION_STEP)))
    current = wrap_centered(phi)
    done, step = 0., 1. / n_steps
    while done < 1.:
        fraction = min(1., done + step)
        candidate, error = _inversion_step(E, geo, current, start + shift * fraction)
        if error <= TRANSLATION_TOL:
            current, done = candidate, fraction
            continue
        step /= 2.
        if step < 1. / (n_steps * 2 ** MAX_HALVINGS):
            raise ConvergenceError(f'Abel inversion stalled at fraction {fraction:.4f} of the path with residual '
                                   f'{error:.3e}', last_iterates=(current, candidate))
    return wrap_angle(current)


def divisor_sequence(E: GapSet, geo: EquilibriumData, phi0, n_sites: int) -> np.ndarray:
    """ Angles phi(n), n = 0 .. n_sites, obtained by repeated translation by alpha. """
    alpha = shift_character(E, geo)
    out = [wrap_angle(np.asarray(phi0, dtype=np.float64).reshape(-1))]
    for _ in range(n_sites):
        out.append(translate_divisor(E, geo, out[-1], alpha))
    return np.array(out).reshape(n_sites + 1, E.n_gaps)


def toda_frequencies(E: GapSet, geo: EquilibriumData, traj):
    """ Affine fit of the continuous Abel map along a Dubrovin trajectory.

    The map decreases as the angles advance, so on a one-gap set zeta * T = -2 pi for the
    circulation period T.

    Returns:
        (zeta, residual): the fitted slopes and the largest absolute fit residual.
    """
    _check(E, geo)
    if E.n_gaps == 0:
        return np.zeros(0), 0.
    if len(traj.times) < MIN_FIT_SAMPLES:
        raise DomainError(f'at least {MIN_FIT_SAMPLES} samples are needed for a frequency fit, got {len(traj.times)}')
    images = np.array([abel_map(E, geo, phi, continuous=True) for phi in traj.lifted])
    unwrapped, dense = unwrap_checked(images, axis=0)
    if not dense:
        raise DomainError('trajectory sampling is too sparse to unwrap the Abel coordinates')
    zeta, residual = np.empty(E.n_gaps), 0.
    for j in range(E.n_gaps):
        zeta[j], _, r = fit_line(traj.times, unwrapped[:, j])
        residual = max(residual, r)
    return zeta, float(residual)
