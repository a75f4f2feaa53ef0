"""
Spectra of periodic Jacobi operators.

Band edges are the eigenvalues of the periodic (theta = 0) and antiperiodic (theta = pi)
Bloch matrices. They are polished as roots of Delta(x) = +-2 with brentq.
"""
import numpy as np
from scipy.optimize import brentq

from todalab.error import SpectrumError, UnsupportedTopologyError
from todalab.jacobi.operator import JacobiOperator
from todalab.jacobi.transfer import floquet_discriminant
from todalab.spectral.gapset import GapSet

DEGENERATE_GAP = 1e-10
BRACKET_FRACTION = 1e-8


def band_edges(op: JacobiOperator) -> np.ndarray:
    """ The 2p Bloch eigenvalues in increasing order; bands are [e_0, e_1], [e_2, e_3], ... """
    if not op.is_periodic:
        raise UnsupportedTopologyError('band_edges requires a periodic operator')
    periodic = np.linalg.eigvalsh(op.bloch_matrix(0.))
    antiperiodic = np.linalg.eigvalsh(op.bloch_matrix(np.pi))
    return np.sort(np.concatenate([periodic, antiperiodic]))


def _polish(op, x0, room, scale):
    target = 2. * np.sign(floquet_discriminant(op, x0))
    f = lambda x: floquet_discriminant(op, x) - target
    delta = min(BRACKET_FRACTION * scale, 0.25 * room)
    attempts = []
    for _ in range(4):
        lo, hi = x0 - delta, x0 + delta
        flo, fhi = f(lo), f(hi)
        attempts.append((lo, hi, flo, fhi))
        if flo * fhi <= 0:
            return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps), None
        delta = min(10. * delta, 0.25 * room)
    return x0, attempts


def periodic_spectrum(op: JacobiOperator) -> GapSet:
    """ The spectrum {x : |Delta(x)| <= 2} of a periodic operator as a GapSet.

    Gaps narrower than ``DEGENERATE_GAP`` times the convex-hull width are treated as
    closed and dropped.

    Raises:
        SpectrumError: an edge could not be bracketed; the error lists every attempt.
    """
    edges = band_edges(op)
    scale = max(edges[-1] - edges[0], 1.)
    p = op.period
    kept = [(edges[2 * j - 1], edges[2 * j]) for j in range(1, p)
            if edges[2 * j] - edges[2 * j - 1] > DEGENERATE_GAP * (edges[-1] - edges[0])]
    points = [edges[0]] + [x for gap in kept for x in gap] + [edges[-1]]

    polished, failed = [], []
    for i, x0 in enumerate(points):
        neighbours = [abs(x0 - points[k]) for k in (i - 1, i + 1) if 0 <= k < len(points)]
        room = min(neighbours) if neighbours else scale
        x, attempts = _polish(op, x0, room, scale)
        if attempts is not None:
            failed.extend(attempts)
        polished.append(x)
    if failed:
        raise SpectrumError(f'could not bracket {len(failed) // 4} band edge(s) of {op!r}', failed)
    gaps = [(polished[2 * k + 1], polished[2 * k + 2]) for k in range(len(kept))]
    return GapSet(polished[0], polished[-1], gaps)
