"""
Dirichlet data (mu_j, sigma_j) of an operator and the angle coordinates on the
isospectral torus,

    mu_j = E_j^- + gamma_j cos^2(phi_j / 2),

    sigma_j = +1 for phi_j in (0, pi], -1 for phi_j in (-pi, 0), 0 for phi_j in 2 pi Z.

Angle vectors are plain float arrays with one entry per gap of the associated GapSet.
"""
from dataclasses import dataclass

import numpy as np

from todalab.error import DataExtractionError, DimensionError, DomainError
from todalab.jacobi.operator import JacobiOperator
from todalab.np.functional import wrap_centered
from todalab.spectral.gapset import GapSet
from todalab.spectral.weyl import green_diag, weyl_m

BISECTION_TOL = 1e-12
POLE_OFFSET = 1e-6
MONOTONICITY_SAMPLES = 8


@dataclass(frozen=True)
class DirichletDivisor:
    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        mu = np.array(self.mu, dtype=np.float64).reshape(-1)
        sigma = np.array(self.sigma, dtype=np.int64).reshape(-1)
        if mu.shape != sigma.shape:
            raise DimensionError(f'mu and sigma must have equal length, got {mu.size} and {sigma.size}')
        if not np.all(np.isin(sigma, (-1, 0, 1))):
            raise DomainError(f'sigma entries must be -1, 0 or +1, got {sigma.tolist()}')
        object.__setattr__(self, 'mu', mu)
        object.__setattr__(self, 'sigma', sigma)

    def __len__(self):
        return self.mu.size

    def __eq__(self, other):
        return isinstance(other, DirichletDivisor) and np.array_equal(self.mu, other.mu) and \
               np.array_equal(self.sigma, other.sigma)


def _check_dimension(E: GapSet, n: int, what: str):
    if n != E.n_gaps:
        raise DimensionError(f'{what} has {n} entries but the gap set has {E.n_gaps} gaps')


def sigma_of_angles(phi) -> np.ndarray:
    w = wrap_centered(phi)
    return np.where(w > 0, 1, np.where(w < 0, -1, 0)).astype(np.int64)


def divisor_from_angles(E: GapSet, phi) -> DirichletDivisor:
    phi = np.asarray(phi, dtype=np.float64).reshape(-1)
    _check_dimension(E, phi.size, 'angle vector')
    mu = E.lefts + E.gamma * np.cos(0.5 * phi) ** 2
    return DirichletDivisor(mu=mu, sigma=sigma_of_angles(phi))


def angles_from_divisor(E: GapSet, d: DirichletDivisor) -> np.ndarray:
    """ phi_j = +-2 arccos(sqrt((mu_j - E_j^-) / gamma_j)) with the sign of sigma_j, in [-pi, pi]. """
    _check_dimension(E, len(d), 'divisor')
    slack = BISECTION_TOL * E.gamma
    outside = (d.mu < E.lefts - slack) | (d.mu > E.rights + slack)
    if np.any(outside):
        j = int(np.argmax(outside))
        raise DomainError(f'mu_{j} = {d.mu[j]:.17g} lies outside gap {j} {E.gaps[j]}')
    ratio = np.clip((d.mu - E.lefts) / E.gamma, 0., 1.)
    phi = 2. * np.arccos(np.sqrt(ratio))
    return np.where(d.sigma < 0, -phi, phi)


def _pole_side(op, mu, lo, hi, method):
    delta = POLE_OFFSET * (hi - lo)
    points = [max(mu - delta, lo + 0.5 * delta), min(mu + delta, hi - 0.5 * delta)]
    plus = sum(abs(weyl_m(op, x, +1, method=method)) for x in points)
    minus = sum(abs(weyl_m(op, x, -1, method=method)) for x in points)
    return 1 if plus > minus else -1


def _gap_point(op, lo, hi, method):
    r = lambda x: green_diag(op, x, 0, method=method)
    samples = lo + (hi - lo) * (np.arange(MONOTONICITY_SAMPLES) + 0.5) / MONOTONICITY_SAMPLES
    values = np.array([r(x) for x in samples])
    if not np.all(np.diff(values) > 0):
        raise DataExtractionError(f'r(0, 0; x) is not increasing on the gap ({lo}, {hi}): samples {values.tolist()}; '
                                  f'the operator is probably not in the isospectral class of the gap set')
    left, right = lo, hi
    moved_left = moved_right = False
    while right - left > BISECTION_TOL * (hi - lo):
        mid = 0.5 * (left + right)
        value = r(mid)
        if value == 0.:
            return mid, _pole_side(op, mid, lo, hi, method)
        if value < 0:
            left, moved_left = mid, True
        else:
            right, moved_right = mid, True
    if not moved_left:
        return lo, 0
    if not moved_right:
        return hi, 0
    mu = 0.5 * (left + right)
    return mu, _pole_side(op, mu, lo, hi, method)


def dirichlet_data(op: JacobiOperator, E: GapSet, site: int = 0, method=None) -> DirichletDivisor:
    """ The Dirichlet divisor of ``op`` at ``site``.

    Per gap, the zero of the increasing function x -> r(site, site; x) is bisected to
    1e-12 gamma_j. A function of constant sign pins mu_j to the edge with sigma_j = 0. At an
    interior zero, sigma_j = +1 when m_+ carries the pole and -1 when m_- does, detected
    by comparing |m_+| and |m_-| at mu_j +- 1e-6 gamma_j.

    Raises:
        DataExtractionError: r is not increasing on some gap.
    """
    shifted = op.shift(site)
    mu = np.empty(E.n_gaps)
    sigma = np.empty(E.n_gaps, dtype=np.int64)
    for j, (lo, hi) in enumerate(E.gaps):
        mu[j], sigma[j] = _gap_point(shifted, lo, hi, method)
    return DirichletDivisor(mu=mu, sigma=sigma)


def band_samples(E: GapSet, n_samples: int, margin: float = 0.1) -> np.ndarray:
    """ ``n_samples`` equispaced points per band, keeping ``margin`` of the band width
    clear of either edge. """
    pieces = [lo + (hi - lo) * np.linspace(margin, 1. - margin, n_samples) for lo, hi in E.bands]
    return np.concatenate(pieces)


def reflectionless_residual(op: JacobiOperator, E: GapSet, n_sites: int, n_samples: int, eps: float,
                            margin: float = 0.1, method=None) -> float:
    """ max |Re r(n, n; x + i eps)| over band samples x and |n| <= n_sites. """
    if eps <= 0:
        raise DomainError(f'eps must be positive, got {eps}')
    xs = band_samples(E, n_samples, margin)
    residual = 0.
    for n in range(-n_sites, n_sites + 1):
        for x in xs:
            residual = max(residual, abs(np.real(green_diag(op, complex(x, eps), n, method=method))))
    return float(residual)
