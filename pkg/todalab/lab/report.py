"""
Result tables. Each table is written as ``<name>.csv`` (17 significant digits, '.'
decimal point) and ``<name>.meta.json``.
"""
import json
import os
import os.path as osp
from dataclasses import dataclass, field
from typing import List

import pandas as pd

from todalab.error import ToleranceViolation
from todalab.utils.serialization_utils import convert_json

FLOAT_FORMAT = '%.17g'


@dataclass
class ReportTable:
    name: str
    frame: pd.DataFrame
    metadata: dict = field(default_factory=dict)

    @property
    def columns(self) -> List[str]:
        return list(self.frame.columns)

    def to_csv(self) -> str:
        return self.frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')

    def write(self, output_dir) -> str:
        os.makedirs(output_dir, exist_ok=True)
        path = osp.join(output_dir, f'{self.name}.csv')
        with open(path, 'w', newline='') as f:
            f.write(self.to_csv())
        with open(osp.join(output_dir, f'{self.name}.meta.json'), 'w') as f:
            json.dump(convert_json(self.metadata), f, indent=4, sort_keys=True)
        return path


@dataclass
class Check:
    name: str
    value: float
    bound: float
    passed: bool

    @classmethod
    def at_most(cls, name, value, bound):
        return cls(name=name, value=float(value), bound=float(bound), passed=bool(value <= bound))

    @classmethod
    def at_least(cls, name, value, bound):
        return cls(name=name, value=float(value), bound=float(bound), passed=bool(value >= bound))

    @classmethod
    def holds(cls, name, condition):
        return cls(name=name, value=float(bool(condition)), bound=1., passed=bool(condition))


@dataclass
class ExperimentResult:
    tables: List[ReportTable] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)

    def add_table(self, name, frame):
        self.tables.append(ReportTable(name=name, frame=frame))

    def check(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def checks_table(self, name) -> ReportTable:
        frame = pd.DataFrame([dict(check=c.name, value=c.value, bound=c.bound, passed=c.passed) for c in self.checks],
                             columns=['check', 'value', 'bound', 'passed'])
        return ReportTable(name=name, frame=frame)

    @property
    def failures(self) -> List[str]:
        return [f'{c.name}: {c.value:.6g} vs bound {c.bound:.6g}' for c in self.checks if not c.passed]

    def raise_on_failure(self):
        if self.failures:
            raise ToleranceViolation(self.failures)
