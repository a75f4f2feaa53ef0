"""
The Dubrovin vector field on the angle torus of a finite-gap set.

    Psi_j(phi) = 2 (|E_lo - mu_j| |E_hi - mu_j|
                    prod_{k != j} |E_k^- - mu_j| |E_k^+ - mu_j| / (mu_k - mu_j)^2)^(1/2)

with mu = mu(phi). The radicands are taken in absolute value so that Psi > 0 on the
whole torus and phi_j increases strictly along d phi / dt = Psi(phi).
"""
import numpy as np

from todalab.error import DimensionError
from todalab.np.functional import torus_arc
from todalab.spectral.dirichlet import sigma_of_angles
from todalab.spectral.gapset import GapSet


def _angles(E: GapSet, phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=np.float64).reshape(-1)
    if phi.size != E.n_gaps:
        raise DimensionError(f'angle vector has {phi.size} entries but the gap set has {E.n_gaps} gaps')
    return phi


def mu_of_angles(E: GapSet, phi) -> np.ndarray:
    return E.lefts + E.gamma * np.cos(0.5 * np.asarray(phi)) ** 2


def _pair_terms(E: GapSet, mu):
    """ Matrices indexed [j, k] of log|E_k^- - mu_j| + log|E_k^+ - mu_j| - 2 log|mu_k - mu_j|,
    zero on the diagonal. """
    g = mu.size
    diff = mu[None, :] - mu[:, None]
    off = ~np.eye(g, dtype=bool)
    assert np.all(diff[off] != 0), 'Dirichlet eigenvalues of distinct gaps coincide'
    terms = np.zeros((g, g))
    terms[off] = (np.log(np.abs(E.lefts[None, :] - mu[:, None])) +
                  np.log(np.abs(E.rights[None, :] - mu[:, None])) -
                  2. * np.log(np.abs(diff)))[off]
    return terms


def psi(E: GapSet, phi) -> np.ndarray:
    phi = _angles(E, phi)
    if phi.size == 0:
        return np.zeros(0)
    mu = mu_of_angles(E, phi)
    log_outer = np.log(np.abs(E.E_lo - mu)) + np.log(np.abs(E.E_hi - mu))
    return 2. * np.exp(0.5 * (log_outer + np.sum(_pair_terms(E, mu), axis=1)))


def psi_jacobian(E: GapSet, phi) -> np.ndarray:
    """ d Psi_j / d phi_k.

    k != j:  -Psi_j gamma_k sin(phi_k) / (2 (mu_j - mu_k))
    k == j:  -(1/4) gamma_j sin(phi_j) Psi_j [1/(mu_j - E_lo) + 1/(mu_j - E_hi)
                 + sum_{l != j} (1/(mu_j - E_l^-) + 1/(mu_j - E_l^+) - 2/(mu_j - mu_l))]
    """
    phi = _angles(E, phi)
    g = phi.size
    if g == 0:
        return np.zeros((0, 0))
    mu = mu_of_angles(E, phi)
    values = psi(E, phi)
    gamma, s = E.gamma, np.sin(phi)
    off = ~np.eye(g, dtype=bool)
    with np.errstate(divide='ignore', invalid='ignore'):
        inv_mu = np.where(off, 1. / np.where(off, mu[:, None] - mu[None, :], 1.), 0.)
        inner = np.where(off, 1. / (mu[:, None] - E.lefts[None, :]) + 1. / (mu[:, None] - E.rights[None, :]), 0.)
    jac = -0.5 * values[:, None] * gamma[None, :] * s[None, :] * inv_mu
    bracket = 1. / (mu - E.E_lo) + 1. / (mu - E.E_hi) + np.sum(inner - 2. * inv_mu, axis=1)
    jac[np.diag_indices(g)] = -0.25 * gamma * s * values * bracket
    return jac


def mu_velocity(E: GapSet, phi) -> np.ndarray:
    """ d mu_j / dt = -sigma_j (|E_j^+ - mu_j| |mu_j - E_j^-|)^(1/2) Psi_j(phi). """
    phi = _angles(E, phi)
    mu = mu_of_angles(E, phi)
    radius = np.sqrt(np.abs(E.rights - mu) * np.abs(mu - E.lefts))
    return -sigma_of_angles(phi) * radius * psi(E, phi)


def torus_distance(E: GapSet, phi, phi_other) -> float:
    """ sup_j gamma_j^(1/2) |phi_j - phi_other_j|_T with |.|_T the shorter arc. """
    phi = _angles(E, phi)
    phi_other = _angles(E, phi_other)
    if phi.size == 0:
        return 0.
    return float(np.max(np.sqrt(E.gamma) * torus_arc(phi, phi_other)))


def tangent_norm(E: GapSet, v) -> float:
    """ sup_j gamma_j^(1/2) |v_j|, the norm the torus distance induces on tangent vectors. """
    v = _angles(E, v)
    return float(np.max(np.sqrt(E.gamma) * np.abs(v))) if v.size else 0.
