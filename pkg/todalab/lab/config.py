"""
Experiment configuration.

A config is a JSON document::

    {
        "schema_version": 1,
        "experiment": "isospectrality",
        "operator": {"preset": "p4-seed0"},
        "gapset": "from-operator",
        "tol": 1e-10,
        "times": [0.0, 0.25, 0.5, 0.75, 1.0],
        "seed": 0
    }

``operator`` is a preset reference or an explicit periodic operator {"a": [...], "b": [...]}.
``gapset`` is "from-operator", a preset reference or explicit edges
{"E_lo": ..., "E_hi": ..., "gaps": [[lo, hi], ...]}. ``params`` holds experiment
specific settings.
"""
import json
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional

import numpy as np

from todalab.error import ConfigError, Error, UnknownExperimentError
from todalab.jacobi.operator import JacobiOperator
from todalab.lab.presets import GAPSET, OPERATOR, PRESETS, preset_gapset, preset_operator
from todalab.spectral.floquet import periodic_spectrum
from todalab.spectral.gapset import GapSet, gapset_diagnostics
from todalab.utils.serialization_utils import config_digest

SCHEMA_VERSION = 1
FROM_OPERATOR = 'from-operator'

EXPERIMENTS = ('isospectrality', 'dubrovin-vs-direct', 'mmatrix-flow', 'craig-report', 'linearization',
               'approximation', 'appendix-a', 'edge-crossing')


@dataclass
class ExperimentConfig:
    experiment: str
    schema_version: int = SCHEMA_VERSION
    name: Optional[str] = None
    operator: Optional[dict] = None
    gapset: Optional[object] = None
    tol: float = 1e-10
    times: List[float] = field(default_factory=lambda: np.linspace(0., 1., 11).tolist())
    truncations: List[int] = field(default_factory=list)
    seed: int = 0
    output: Optional[str] = None
    workers: Optional[int] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name is None:
            self.name = self.experiment

    @classmethod
    def from_dict(cls, data: dict) -> 'ExperimentConfig':
        if not isinstance(data, dict):
            raise ConfigError(f'a config must be a JSON object, got {type(data).__name__}')
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError([f'unknown config key {k!r}' for k in unknown])
        if 'experiment' not in data:
            raise ConfigError('missing required key "experiment"')
        return cls(**data)

    @classmethod
    def load(cls, path) -> 'ExperimentConfig':
        try:
            with open(path, 'r') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f'{path} is not valid JSON: {e}')
        except OSError as e:
            raise ConfigError(f'cannot read {path}: {e}')
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def digest(self) -> str:
        return config_digest(self.to_dict())

    def param(self, key, default=None):
        return self.params.get(key, default)

    def diagnostics(self) -> List[str]:
        """ Every invariant the config violates; empty for a valid config. """
        problems = []
        if self.schema_version != SCHEMA_VERSION:
            problems.append(f'schema_version must be {SCHEMA_VERSION}, got {self.schema_version!r}')
        if self.experiment not in EXPERIMENTS:
            problems.append(f'unknown experiment {self.experiment!r}; expected one of {sorted(EXPERIMENTS)}')
        if not (isinstance(self.tol, (int, float)) and self.tol > 0):
            problems.append(f'tol must be a positive number, got {self.tol!r}')
        times = np.asarray(self.times, dtype=np.float64)
        if times.ndim != 1 or times.size == 0:
            problems.append('times must be a non-empty list of numbers')
        elif not np.all(np.isfinite(times)):
            problems.append('times must be finite')
        elif np.any(np.diff(times) <= 0):
            i = int(np.argmax(np.diff(times) <= 0))
            problems.append(f'times must be strictly increasing; times[{i}] = {times[i]!r} >= times[{i + 1}] = '
                            f'{times[i + 1]!r}')
        if any(not isinstance(n, int) or n < 0 for n in self.truncations):
            problems.append(f'truncations must be nonnegative integers, got {self.truncations!r}')
        if self.workers is not None and (not isinstance(self.workers, int) or self.workers < 1):
            problems.append(f'workers must be a positive integer, got {self.workers!r}')
        problems.extend(self._operator_diagnostics())
        problems.extend(self._gapset_diagnostics())
        return problems

    def _operator_diagnostics(self) -> List[str]:
        entry = self.operator
        if entry is None:
            return []
        if not isinstance(entry, dict):
            return [f'operator must be an object, got {entry!r}']
        if 'preset' in entry:
            preset = PRESETS.get(entry['preset'])
            if preset is None or preset.kind != OPERATOR:
                return [f'unknown operator preset {entry["preset"]!r}']
            return []
        a, b = entry.get('a'), entry.get('b')
        if a is None or b is None:
            return ['operator needs either "preset" or both "a" and "b"']
        a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
        problems = []
        if a.shape != b.shape or a.ndim != 1 or a.size == 0:
            problems.append(f'operator a and b must be non-empty and of equal length, got {a.size} and {b.size}')
        elif np.any(a <= 0):
            problems.append(f'operator a_n must be positive, got a = {a.tolist()}')
        return problems

    def _gapset_diagnostics(self) -> List[str]:
        entry = self.gapset
        if entry is None:
            return []
        if entry == FROM_OPERATOR:
            return [] if self.operator is not None else ['gapset "from-operator" needs an operator']
        if isinstance(entry, str):
            entry = {'preset': entry}
        if not isinstance(entry, dict):
            return [f'gapset must be "{FROM_OPERATOR}" or an object, got {entry!r}']
        if 'preset' in entry:
            preset = PRESETS.get(entry['preset'])
            if preset is None or preset.kind != GAPSET:
                return [f'unknown gapset preset {entry["preset"]!r}']
            return []
        try:
            gaps = [tuple(float(v) for v in gap) for gap in entry.get('gaps', [])]
            return gapset_diagnostics(float(entry['E_lo']), float(entry['E_hi']), gaps)
        except (KeyError, TypeError, ValueError):
            return ['gapset needs "E_lo", "E_hi" and a list of [lo, hi] gaps']

    def validate(self):
        """
        Raises:
            UnknownExperimentError: the experiment name is not known.
            ConfigError: any other diagnostic.
        """
        if self.experiment not in EXPERIMENTS:
            raise UnknownExperimentError(self.experiment, EXPERIMENTS)
        problems = self.diagnostics()
        if problems:
            raise ConfigError(problems)

    def build_operator(self, default: str = None) -> JacobiOperator:
        entry = self.operator if self.operator is not None else ({'preset': default} if default else None)
        if entry is None:
            raise ConfigError(f'experiment {self.experiment!r} needs an operator')
        if 'preset' in entry:
            return preset_operator(entry['preset'], seed=self.seed)
        return JacobiOperator.periodic(entry['a'], entry['b'])

    def build_gapset(self, default=None) -> GapSet:
        entry = self.gapset if self.gapset is not None else default
        if entry is None:
            raise ConfigError(f'experiment {self.experiment!r} needs a gap set')
        if entry == FROM_OPERATOR:
            return periodic_spectrum(self.build_operator())
        if isinstance(entry, str):
            entry = {'preset': entry}
        if 'preset' in entry:
            return preset_gapset(entry['preset'], n_gaps=entry.get('n_gaps'))
        try:
            return GapSet(entry['E_lo'], entry['E_hi'], [tuple(g) for g in entry.get('gaps', [])])
        except Error as e:
            raise ConfigError(str(e))
