"""
Equilibrium measure, capacity and Green's function of a finite-gap set.

Everything is computed in the scaled variable s = (x - c) / h, c and h the centre and
half width of [E_lo, E_hi], so that E maps into [-1, 1]. With R(s) the monic polynomial
vanishing at the 2g + 2 band edges,

    d rho_E = |psi(s)| / (pi sqrt|R(s)|) ds   on the bands,

where psi = 2^(1-g) T_g + sum_{i<g} c_i T_i is monic of degree g and fixed by the g
conditions that psi / sqrt|R| integrates to zero over every gap. Integrals over a band or
gap (l, r) use s = l + (r - l)(1 - cos theta) / 2, which absorbs the two edge
singularities: ds / sqrt|(s - l)(s - r)| = d theta.
"""
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev
from scipy.integrate import fixed_quad, quad

from todalab.error import DomainError, GeometryError
from todalab.spectral.gapset import GapSet

CAPACITY_TOL = 1e-10
MAX_NODES = 2 ** 14
MAX_CONDITION = 1e12
PARTIAL_ORDER = 64


@dataclass(frozen=True)
class EquilibriumData:
    E: GapSet
    centre: float
    half_width: float
    edges: np.ndarray
    psi_coeffs: np.ndarray
    gap_matrix: np.ndarray
    n_nodes: int
    nodes: np.ndarray
    weights: np.ndarray
    band: np.ndarray
    band_masses: np.ndarray
    capacity: float
    condition_number: float

    @property
    def n_gaps(self):
        return self.E.n_gaps

    @property
    def robin_constant(self) -> float:
        return float(-np.log(self.capacity))

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def log_scaled_capacity(self) -> float:
        return float(np.log(self.capacity / self.half_width))

    def to_s(self, x):
        return (np.asarray(x) - self.centre) / self.half_width

    def interval(self, k: int):
        """ Edge indices of band k // 2 for even k and gap (k - 1) // 2 for odd k. """
        return k, k + 1

    def gap_interval(self, j: int):
        return self.interval(2 * j + 1)

    def band_interval(self, i: int):
        return self.interval(2 * i)


def _theta_map(lo, hi, theta):
    return lo + (hi - lo) * 0.5 * (1. - np.cos(theta))


def _rest(edges, s, skip):
    """ prod_{i not in skip} (s - e_i). """
    keep = np.ones(edges.size, dtype=bool)
    keep[list(skip)] = False
    s = np.asarray(s, dtype=np.float64)
    return np.prod(s[..., None] - edges[keep], axis=-1)


def interval_integrand(edges, coeffs, interval, theta):
    """ poly(s(theta)) / sqrt|R_rest(s(theta))| on the interval with the given edge indices. """
    i0, i1 = interval
    s = _theta_map(edges[i0], edges[i1], theta)
    return chebyshev.chebval(s, coeffs) / np.sqrt(np.abs(_rest(edges, s, interval)))


def partial_integral(edges, coeffs, interval, theta_x) -> float:
    """ Signed integral of poly / sqrt|R| from the left end of the interval to s(theta_x). """
    if theta_x == 0.:
        return 0.
    value, _ = fixed_quad(lambda th: interval_integrand(edges, coeffs, interval, th), 0., theta_x, n=PARTIAL_ORDER)
    return float(value)


def outer_integral(edges, coeffs, s) -> float:
    """ Integral of |poly| / sqrt|R| from the nearest outer edge (+-1) to s, |s| >= 1. """
    top = s >= 1.
    edge_index = edges.size - 1 if top else 0
    sign = 1. if top else -1.
    skip = (edge_index,)

    def integrand(u):
        t = sign * (1. + u * u)
        return 2. * abs(chebyshev.chebval(t, coeffs)) / np.sqrt(abs(_rest(edges, t, skip)))

    value, _ = quad(integrand, 0., np.sqrt(abs(s) - 1.), epsabs=1e-14, epsrel=1e-13, limit=200)
    return float(value)


def theta_of(edges, interval, s) -> float:
    lo, hi = edges[interval[0]], edges[interval[1]]
    return float(np.arccos(np.clip(1. - 2. * (s - lo) / (hi - lo), -1., 1.)))


def _gauss_chebyshev(n):
    theta = (2. * np.arange(1, n + 1) - 1.) * np.pi / (2. * n)
    return theta, np.pi / n


def _gap_matrix(edges, g, n):
    theta, w = _gauss_chebyshev(n)
    A = np.empty((g, g + 1))
    for k in range(g):
        interval = (2 * k + 1, 2 * k + 2)
        s = _theta_map(edges[interval[0]], edges[interval[1]], theta)
        scale = w / np.sqrt(np.abs(_rest(edges, s, interval)))
        A[k] = scale @ chebyshev.chebvander(s, g)
    return A


def _psi_coefficients(A, g):
    if g == 0:
        return np.ones(1), 1.
    lead = 2. ** (1 - g)
    system = A[:, :g]
    cond = float(np.linalg.cond(system))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise GeometryError('gap conditions for the equilibrium density are ill-conditioned', cond)
    c = np.linalg.solve(system, -lead * A[:, g])
    return np.concatenate([c, [lead]]), cond


def _log_scaled_capacity(edges, coeffs):
    skip = (edges.size - 1,)

    def integrand(u):
        t = 1. + u * u
        return 2. * chebyshev.chebval(t, coeffs) / np.sqrt(abs(_rest(edges, t, skip))) - 2. * u / t

    value, _ = quad(integrand, 0., np.inf, epsabs=1e-14, epsrel=1e-13, limit=400)
    return -value


def equilibrium_measure(E: GapSet, n_nodes: int = 64) -> EquilibriumData:
    """ Equilibrium measure and capacity of E.

    The node count starts at ``n_nodes`` per band and gap and is doubled until the
    capacity changes by less than 1e-10.

    Raises:
        GeometryError: the gap conditions are ill-conditioned, or the capacity did not
            settle before 2^14 nodes.
    """
    if n_nodes < 32:
        raise DomainError(f'n_nodes must be at least 32, got {n_nodes}')
    centre, half_width = 0.5 * (E.E_lo + E.E_hi), 0.5 * E.width
    edges = (E.edges - centre) / half_width
    edges[0], edges[-1] = -1., 1.
    g = E.n_gaps

    n, previous = n_nodes, None
    while True:
        A = _gap_matrix(edges, g, n)
        coeffs, cond = _psi_coefficients(A, g)
        log_c = _log_scaled_capacity(edges, coeffs)
        capacity = half_width * np.exp(log_c)
        if previous is not None and abs(capacity - previous) < CAPACITY_TOL:
            break
        if 2 * n > MAX_NODES:
            raise GeometryError(f'capacity did not settle to {CAPACITY_TOL} with {n} nodes '
                                f'(last two values {previous!r}, {capacity!r})', cond)
        previous = capacity
        n *= 2

    theta, _ = _gauss_chebyshev(n)
    nodes, weights, band = [], [], []
    for i in range(g + 1):
        interval = (2 * i, 2 * i + 1)
        s = _theta_map(edges[interval[0]], edges[interval[1]], theta)
        nodes.append(centre + half_width * s)
        weights.append(np.abs(interval_integrand(edges, coeffs, interval, theta)) / n)
        band.append(np.full(n, i))
    weights = np.concatenate(weights)
    band = np.concatenate(band)
    masses = np.bincount(band, weights=weights, minlength=g + 1)
    return EquilibriumData(E=E, centre=centre, half_width=half_width, edges=edges, psi_coeffs=coeffs,
                           gap_matrix=A, n_nodes=n, nodes=np.concatenate(nodes), weights=weights, band=band,
                           band_masses=masses, capacity=float(capacity), condition_number=cond)


def locate(geo: EquilibriumData, s):
    """ ('below' | 'above' | 'band' | 'gap', index) for a real scaled point. """
    if s <= -1.:
        return 'below', -1
    if s >= 1.:
        return 'above', -1
    k = int(np.searchsorted(geo.edges, s, side='right')) - 1
    k = min(k, geo.edges.size - 2)
    return ('band', k // 2) if k % 2 == 0 else ('gap', (k - 1) // 2)


def _band_potential(geo: EquilibriumData, s) -> float:
    """ int log|t - s| d rho(t) in scaled units for s on a band, by adaptive quadrature. """
    total = 0.
    for i in range(geo.n_gaps + 1):
        interval = geo.band_interval(i)
        lo, hi = geo.edges[interval[0]], geo.edges[interval[1]]
        theta_s = theta_of(geo.edges, interval, s) if lo <= s <= hi else None
        points = [theta_s] if theta_s is not None and 0. < theta_s < np.pi else None

        def integrand(th):
            t = _theta_map(lo, hi, th)
            weight = abs(interval_integrand(geo.edges, geo.psi_coeffs, interval, th)) / np.pi
            return np.log(abs(t - s)) * weight if t != s else 0.

        value, _ = quad(integrand, 0., np.pi, points=points, epsabs=1e-13, epsrel=1e-12, limit=400)
        total += value
    return total


def _green_real(geo: EquilibriumData, x) -> float:
    s = float(geo.to_s(x))
    where, k = locate(geo, s)
    if where in ('below', 'above'):
        return outer_integral(geo.edges, geo.psi_coeffs, s)
    if where == 'gap':
        interval = geo.gap_interval(k)
        return abs(partial_integral(geo.edges, geo.psi_coeffs, interval, theta_of(geo.edges, interval, s)))
    return _band_potential(geo, s) - geo.log_scaled_capacity


def green_function(geo: EquilibriumData, z):
    """ g(z) = int log|z - t| d rho_E(t) - log C(E).

    Real points use closed integrals of the density derivative off E and the potential
    itself on E; complex points use the stored quadrature nodes.
    """
    z_arr = np.asarray(z)
    if np.iscomplexobj(z_arr) and np.any(z_arr.imag != 0):
        zs = z_arr.reshape(-1)
        values = np.array([np.sum(geo.weights * np.log(np.abs(geo.nodes - zi))) for zi in zs]) - np.log(geo.capacity)
        return values.reshape(z_arr.shape) if z_arr.ndim else float(values[0])
    xs = np.real(z_arr).astype(np.float64)
    values = np.array([_green_real(geo, x) for x in xs.reshape(-1)])
    return values.reshape(xs.shape) if xs.ndim else float(values[0])


def equilibrium_cdf(geo: EquilibriumData, x):
    """ rho_E((-inf, x]). """
    xs = np.asarray(x, dtype=np.float64)
    out = []
    for xi in xs.reshape(-1):
        s = float(geo.to_s(xi))
        where, k = locate(geo, s)
        if where == 'below':
            out.append(0.)
        elif where == 'above':
            out.append(1.)
        elif where == 'gap':
            out.append(float(np.sum(geo.band_masses[:k + 1])))
        else:
            interval = geo.band_interval(k)
            theta = theta_of(geo.edges, interval, s)
            partial, _ = quad(lambda th: abs(interval_integrand(geo.edges, geo.psi_coeffs, interval, th)),
                              0., theta, epsabs=1e-14, epsrel=1e-12, limit=200)
            out.append(float(np.sum(geo.band_masses[:k]) + partial / np.pi))
    out = np.array(out)
    return out.reshape(xs.shape) if xs.ndim else float(out[0])


def equilibrium_density(geo: EquilibriumData, x):
    """ d rho_E / dx, zero off E. """
    xs = np.asarray(x, dtype=np.float64)
    s = geo.to_s(xs)
    R = np.prod(s[..., None] - geo.edges, axis=-1)
    with np.errstate(divide='ignore', invalid='ignore'):
        density = np.abs(chebyshev.chebval(s, geo.psi_coeffs)) / (np.pi * geo.half_width * np.sqrt(np.abs(R)))
    return np.where(geo.E.contains(xs) & (R != 0), density, 0.)
