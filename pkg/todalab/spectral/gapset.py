"""
Finite-gap sets E = [E_lo, E_hi] minus a finite union of open gaps.

Gaps are stored left to right. Per-gap quantities (gamma, eta, Dirichlet data, angles)
use the same order; truncation by size is a separate index permutation.
"""
from typing import List, Sequence, Tuple

import numpy as np

from todalab.error import DomainError


class GapSet(object):
    def __init__(self, E_lo: float, E_hi: float, gaps: Sequence[Tuple[float, float]] = ()):
        gaps = [(float(lo), float(hi)) for lo, hi in gaps]
        gaps.sort()
        problems = gapset_diagnostics(E_lo, E_hi, gaps)
        if problems:
            raise DomainError('; '.join(problems))
        self.E_lo = float(E_lo)
        self.E_hi = float(E_hi)
        self.gaps = tuple(gaps)
        self.lefts = np.array([g[0] for g in gaps], dtype=np.float64)
        self.rights = np.array([g[1] for g in gaps], dtype=np.float64)
        for arr in (self.lefts, self.rights):
            arr.setflags(write=False)

    @classmethod
    def interval(cls, E_lo=-1., E_hi=1.):
        return cls(E_lo, E_hi, ())

    @classmethod
    def from_bands(cls, bands: Sequence[Tuple[float, float]]):
        """ The set with the given closed bands; consecutive bands are separated by gaps. """
        bands = sorted((float(lo), float(hi)) for lo, hi in bands)
        if len(bands) == 0:
            raise DomainError('at least one band is required')
        gaps = [(bands[i][1], bands[i + 1][0]) for i in range(len(bands) - 1)]
        return cls(bands[0][0], bands[-1][1], gaps)

    def __repr__(self):
        return f'GapSet(E_lo={self.E_lo!r}, E_hi={self.E_hi!r}, gaps={list(self.gaps)!r})'

    def __eq__(self, other):
        return isinstance(other, GapSet) and self.E_lo == other.E_lo and self.E_hi == other.E_hi and \
               self.gaps == other.gaps

    def __len__(self):
        return len(self.gaps)

    @property
    def n_gaps(self):
        return len(self.gaps)

    @property
    def width(self):
        return self.E_hi - self.E_lo

    @property
    def gamma(self) -> np.ndarray:
        return self.rights - self.lefts

    @property
    def centres(self) -> np.ndarray:
        return 0.5 * (self.rights + self.lefts)

    @property
    def bands(self) -> List[Tuple[float, float]]:
        edges = self.edges
        return [(edges[2 * i], edges[2 * i + 1]) for i in range(self.n_gaps + 1)]

    @property
    def edges(self) -> np.ndarray:
        """ All 2g + 2 band edges in increasing order. """
        inner = np.stack([self.lefts, self.rights], axis=-1).reshape(-1)
        return np.concatenate([[self.E_lo], inner, [self.E_hi]])

    @property
    def eta(self) -> np.ndarray:
        """ eta_j = min(|E_j^+ - E_hi|, |E_j^- - E_lo|). """
        return np.minimum(np.abs(self.rights - self.E_hi), np.abs(self.lefts - self.E_lo))

    @property
    def eta_pair(self) -> np.ndarray:
        """ eta_{j,l} = min(|E_j^+ - E_l^-|, |E_j^- - E_l^+|); the diagonal is left at zero. """
        d1 = np.abs(self.rights[:, None] - self.lefts[None, :])
        d2 = np.abs(self.lefts[:, None] - self.rights[None, :])
        eta = np.minimum(d1, d2)
        np.fill_diagonal(eta, 0.)
        return eta

    def contains(self, x) -> np.ndarray:
        """ Whether real points lie in E (edges included). """
        x = np.asarray(x, dtype=np.float64)
        inside = (x >= self.E_lo) & (x <= self.E_hi)
        for lo, hi in self.gaps:
            inside &= ~((x > lo) & (x < hi))
        return inside

    def gap_index(self, x: float) -> int:
        """ Index of the open gap containing x, or -1. """
        for j, (lo, hi) in enumerate(self.gaps):
            if lo < x < hi:
                return j
        return -1

    def band_index(self, x: float) -> int:
        """ Index of the closed band containing x, or -1. """
        for i, (lo, hi) in enumerate(self.bands):
            if lo <= x <= hi:
                return i
        return -1

    def size_order(self) -> np.ndarray:
        """ Gap indices by decreasing length, ties broken by left edge. """
        return np.lexsort((self.lefts, -self.gamma))

    def subset(self, indices) -> 'GapSet':
        return GapSet(self.E_lo, self.E_hi, [self.gaps[i] for i in indices])

    def mirror(self) -> 'GapSet':
        """ The reflected set -E. """
        return GapSet(-self.E_hi, -self.E_lo, [(-hi, -lo) for lo, hi in self.gaps])

    def to_dict(self):
        return dict(E_lo=self.E_lo, E_hi=self.E_hi, gaps=[list(g) for g in self.gaps])


def gapset_diagnostics(E_lo, E_hi, gaps) -> List[str]:
    """ Every violated ordering or disjointness condition, naming the offending gap. """
    problems = []
    if not (np.isfinite(E_lo) and np.isfinite(E_hi)):
        return [f'band edges must be finite, got [{E_lo}, {E_hi}]']
    if not E_lo < E_hi:
        return [f'E_lo must be below E_hi, got [{E_lo}, {E_hi}]']
    ordered = sorted(gaps)
    for j, (lo, hi) in enumerate(ordered):
        if not lo < hi:
            problems.append(f'gap {j} ({lo}, {hi}) has non-positive length')
        if not (E_lo < lo and hi < E_hi):
            problems.append(f'gap {j} ({lo}, {hi}) is not strictly inside [{E_lo}, {E_hi}]')
        if j > 0 and not ordered[j - 1][1] < lo:
            problems.append(f'gap {j} ({lo}, {hi}) overlaps or touches gap {j - 1} {tuple(ordered[j - 1])}')
    return problems
