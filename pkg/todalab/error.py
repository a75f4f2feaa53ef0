"""
Exceptions raised by todalab. Every error derives from ``Error`` so that callers (and the
command line) can separate library failures from programming mistakes.
"""


class Error(Exception):
    pass


class DimensionError(Error):
    """A sequence does not match the index set of the operator it is used with."""


class DomainError(Error):
    """An argument lies outside the domain of the operation (e.g. a_n <= 0)."""


class UnsupportedTopologyError(Error):
    """The operation is only defined for one of the lattice topologies."""


class MonotonicityError(Error):
    """A quantity that must increase strictly along a flow did not."""


class DependencyError(Error):
    """A required precomputed object was not supplied."""


class StiffnessError(Error):
    def __init__(self, t, h, h_min):
        self.t = t
        self.h = h
        self.h_min = h_min
        super(StiffnessError, self).__init__(
            f'Step size underflow at t={t:.17g}: h={h:.3e} fell below {h_min:.3e}')


class ConvergenceError(Error):
    def __init__(self, message, last_iterates=None):
        self.last_iterates = last_iterates
        if last_iterates is not None:
            message = f'{message}; last two iterates: {last_iterates[0]!r}, {last_iterates[1]!r}'
        super(ConvergenceError, self).__init__(message)


class SpectrumError(Error):
    def __init__(self, message, brackets=None):
        self.brackets = brackets if brackets is not None else []
        report = '\n'.join(f'  [{lo:.17g}, {hi:.17g}] -> f=({flo:.3e}, {fhi:.3e})'
                           for lo, hi, flo, fhi in self.brackets)
        if report:
            message = f'{message}\nbracketing report:\n{report}'
        super(SpectrumError, self).__init__(message)


class DataExtractionError(Error):
    """Dirichlet data could not be extracted consistently from an operator."""


class GeometryError(Error):
    def __init__(self, message, condition_number=None):
        self.condition_number = condition_number
        if condition_number is not None:
            message = f'{message} (condition number {condition_number:.3e})'
        super(GeometryError, self).__init__(message)


class ConfigError(Error):
    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super(ConfigError, self).__init__('Invalid config:\n' + '\n'.join(f'  - {d}' for d in self.diagnostics))


class UnknownExperimentError(ConfigError):
    def __init__(self, name, known):
        super(UnknownExperimentError, self).__init__(
            [f'unknown experiment {name!r}; expected one of {sorted(known)}'])


class ToleranceViolation(Error):
    def __init__(self, failures):
        self.failures = list(failures)
        super(ToleranceViolation, self).__init__(
            'Tolerance violated:\n' + '\n'.join(f'  - {f}' for f in self.failures))
