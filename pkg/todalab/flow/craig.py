"""
Craig-type constants of a finite-gap set and the Lipschitz constant of Psi they bound.

    eta_j     = min(|E_j^+ - E_hi|, |E_j^- - E_lo|)
    eta_{j,l} = min(|E_j^+ - E_l^-|, |E_j^- - E_l^+|)
    C_j       = ((E_hi - E_lo) - eta_j)^(1/2) exp((1/2) sum_{k != j} gamma_k / eta_{j,k})

Suprema over an empty index set are 0.
"""
from dataclasses import dataclass

import numpy as np
import pandas as pd

from todalab.spectral.gapset import GapSet


def _sup(values) -> float:
    values = np.asarray(values, dtype=np.float64)
    return float(np.max(values)) if values.size else 0.


@dataclass(frozen=True)
class CraigReport:
    gamma: np.ndarray
    eta: np.ndarray
    eta_pair: np.ndarray
    C: np.ndarray
    S1: float
    S2: float
    S3: float
    psi_bound: np.ndarray
    lipschitz_bound: float
    literal_lipschitz: float

    @property
    def exponential_rate(self) -> float:
        """ m = 2 L log 2, the growth rate of the distance of finite-gap approximations. """
        return 2. * self.lipschitz_bound * np.log(2.)

    def summary(self) -> dict:
        return dict(n_gaps=int(self.gamma.size), S1=self.S1, S2=self.S2, S3=self.S3,
                    lipschitz_bound=self.lipschitz_bound, literal_lipschitz=self.literal_lipschitz,
                    exponential_rate=self.exponential_rate)

    def per_gap(self) -> pd.DataFrame:
        return pd.DataFrame(dict(gap=np.arange(self.gamma.size), gamma=self.gamma, eta=self.eta, C=self.C,
                                 psi_bound=self.psi_bound))


def _off_sum(matrix) -> np.ndarray:
    matrix = np.array(matrix, dtype=np.float64)
    np.fill_diagonal(matrix, 0.)
    return np.sum(matrix, axis=1)


def _ratio(num, den):
    """ num / den off the diagonal, 0 on it. """
    out = np.zeros(np.broadcast(num, den).shape)
    off = ~np.eye(out.shape[0], dtype=bool)
    out[off] = (np.broadcast_to(num, out.shape) / np.where(off, den, 1.))[off]
    return out


def craig_report(E: GapSet) -> CraigReport:
    gamma, eta, eta_pair = E.gamma, E.eta, E.eta_pair
    width = E.width
    C = np.sqrt(width - eta) * np.exp(0.5 * _off_sum(_ratio(gamma[None, :], eta_pair)))
    S1 = _sup(gamma * C)
    S2 = _sup(gamma / eta * C)
    root = np.sqrt(gamma[:, None] * gamma[None, :])
    cross = _off_sum(_ratio(root, eta_pair))
    S3 = _sup(cross * C)

    # sup_phi Psi_j <= P_j
    P = width * np.prod(1. + _ratio(gamma[None, :], eta_pair), axis=1, where=~np.eye(gamma.size, dtype=bool))
    diagonal = 0.25 * gamma * P * (2. / eta + _off_sum(_ratio(gamma[None, :], eta_pair ** 2)))
    lipschitz = _sup(diagonal + 0.5 * P * cross)
    literal = _sup((gamma / eta + _off_sum(_ratio(gamma[:, None] * gamma[None, :], eta_pair ** 2))) * C + cross * C)
    return CraigReport(gamma=gamma, eta=eta, eta_pair=eta_pair, C=C, S1=S1, S2=S2, S3=S3, psi_bound=P,
                       lipschitz_bound=lipschitz, literal_lipschitz=literal)


def truncated_constants(E: GapSet, N: int) -> np.ndarray:
    """ C_{j,N} = (E_hi - E_lo)^(1/2) exp((1/2) sum_{l <= N, l != j} gamma_l / eta_{j,l}), the
    sum running over the N largest gaps. """
    kept = np.zeros(E.n_gaps, dtype=bool)
    kept[E.size_order()[:N]] = True
    terms = _ratio(E.gamma[None, :], E.eta_pair) * kept[None, :]
    return np.sqrt(E.width) * np.exp(0.5 * _off_sum(terms))


def vector_field_gap_bound(E: GapSet, N: int) -> float:
    """ 2 sup_j (C_j - C_{j,N}), the bound on |Psi - Psi~^N| from truncating to N gaps. """
    report = craig_report(E)
    return 2. * _sup(report.C - truncated_constants(E, N))


def running_sups(E: GapSet, levels) -> pd.DataFrame:
    """ S1, S2, S3 and L of the truncations to the N largest gaps, for N in ``levels``. """
    rows = []
    for N in levels:
        report = craig_report(E.subset(np.sort(E.size_order()[:N])))
        rows.append(dict(N=int(N), **report.summary()))
    return pd.DataFrame(rows)
