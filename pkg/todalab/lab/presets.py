"""
Named operators and gap sets.
"""
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np
import pandas as pd

from todalab.error import ConfigError
from todalab.infra.seeder import Seeder
from todalab.jacobi.operator import JacobiOperator
from todalab.spectral.gapset import GapSet

OPERATOR = 'operator'
GAPSET = 'gapset'

DYADIC_DEFAULT_GAPS = 20


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str
    definition: str
    build: Callable


def _random_periodic(seed=0, period=4):
    rng = Seeder(seed).np_random
    a = rng.uniform(0.3, 0.8, size=period)
    b = rng.uniform(-0.3, 0.3, size=period)
    return JacobiOperator.periodic(a, b)


def synthetic_six_gap() -> GapSet:
    centres = np.array([-0.75, -0.45, -0.15, 0.15, 0.45, 0.75])
    widths = np.array([0.12, 0.06, 0.1, 0.03, 0.08, 0.05])
    return GapSet(-1., 1., list(zip(centres - widths / 2, centres + widths / 2)))


def synthetic_dyadic(n_gaps=DYADIC_DEFAULT_GAPS) -> GapSet:
    """ Gaps centred at 1 - 2^-j of width 4^-(j+2), j = 1 .. n_gaps, inside [-1, 1]. """
    j = np.arange(1, n_gaps + 1, dtype=np.float64)
    centres = 1. - 2. ** -j
    widths = 4. ** -(j + 2)
    return GapSet(-1., 1., list(zip(centres - widths / 2, centres + widths / 2)))


_PRESETS = [
    Preset('free', OPERATOR, 'periodic p=1, a=(0.5,), b=(0,)', lambda seed=0: JacobiOperator.free()),
    Preset('p2-gap', OPERATOR, 'periodic p=2, a=(0.6, 0.4), b=(0, 0)',
           lambda seed=0: JacobiOperator.periodic([0.6, 0.4], [0., 0.])),
    Preset('p2-diagonal', OPERATOR, 'periodic p=2, a=(0.5, 0.5), b=(0.3, -0.3)',
           lambda seed=0: JacobiOperator.periodic([0.5, 0.5], [0.3, -0.3])),
    Preset('p4-seed0', OPERATOR, 'periodic p=4, a ~ U(0.3, 0.8), b ~ U(-0.3, 0.3) from PCG64(seed), seed 0',
           lambda seed=0: _random_periodic(seed)),
    Preset('interval', GAPSET, '[-1, 1], no gaps', lambda n_gaps=None: GapSet.interval(-1., 1.)),
    Preset('one-gap', GAPSET, '[-1, 1] minus (-0.2, 0.2)', lambda n_gaps=None: GapSet(-1., 1., [(-0.2, 0.2)])),
    Preset('two-gap', GAPSET, '[-1, 1] minus (-0.6, -0.4), (0.4, 0.6)',
           lambda n_gaps=None: GapSet(-1., 1., [(-0.6, -0.4), (0.4, 0.6)])),
    Preset('synthetic-6gap', GAPSET,
           '[-1, 1] minus gaps centred at (-0.75, -0.45, -0.15, 0.15, 0.45, 0.75) '
           'of widths (0.12, 0.06, 0.1, 0.03, 0.08, 0.05)',
           lambda n_gaps=None: synthetic_six_gap()),
    Preset('synthetic-dyadic', GAPSET,
           f'[-1, 1] minus gaps centred at 1 - 2^-j of width 4^-(j+2), j = 1 .. N (N = {DYADIC_DEFAULT_GAPS})',
           lambda n_gaps=None: synthetic_dyadic(DYADIC_DEFAULT_GAPS if n_gaps is None else n_gaps)),
]

PRESETS: Dict[str, Preset] = {p.name: p for p in _PRESETS}


def get_preset(name: str, kind: str) -> Preset:
    preset = PRESETS.get(name)
    if preset is None or preset.kind != kind:
        known = sorted(p.name for p in _PRESETS if p.kind == kind)
        raise ConfigError([f'unknown {kind} preset {name!r}; expected one of {known}'])
    return preset


def preset_operator(name: str, seed: int = 0) -> JacobiOperator:
    return get_preset(name, OPERATOR).build(seed=seed)


def preset_gapset(name: str, n_gaps=None) -> GapSet:
    return get_preset(name, GAPSET).build(n_gaps=n_gaps)


def list_presets() -> pd.DataFrame:
    """ Every preset with its kind and defining numbers. """
    return pd.DataFrame([dict(name=p.name, kind=p.kind, definition=p.definition) for p in _PRESETS])
