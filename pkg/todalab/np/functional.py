import numpy as np

TWO_PI = 2. * np.pi


def wrap_angle(phi):
    """ Reduce angles to [0, 2pi). """
    return np.mod(phi, TWO_PI)


def wrap_centered(phi):
    """ Reduce angles to (-pi, pi]. """
    return np.pi - np.mod(np.pi - np.asarray(phi, dtype=np.float64), TWO_PI)


def torus_arc(phi, psi):
    """ Length of the shorter arc between two points of R/2piZ. """
    d = np.abs(wrap_angle(np.asarray(phi) - np.asarray(psi)))
    return np.minimum(d, TWO_PI - d)


def unwrap_checked(x, axis=0, max_jump=np.pi / 2):
    """ Nearest-branch continuation of sampled angles.

    Returns the unwrapped samples and a flag telling whether every successive raw
    difference stayed below ``max_jump`` (i.e. the sampling was dense enough for the
    continuation to be trusted).
    """
    x = np.asarray(x, dtype=np.float64)
    unwrapped = np.unwrap(x, axis=axis)
    if x.shape[axis] < 2:
        return unwrapped, True
    jumps = np.abs(np.diff(unwrapped, axis=axis))
    return unwrapped, bool(np.all(jumps < max_jump))


def fit_line(t, y):
    """ Least-squares line y ~ intercept + slope * t; returns (slope, intercept, max |residual|). """
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    slope, intercept = np.polyfit(t, y, deg=1)
    residual = np.max(np.abs(y - (intercept + slope * t))) if len(t) > 0 else 0.
    return slope, intercept, residual
