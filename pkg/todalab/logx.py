"""
Console and file logging for lab runs.

Every experiment cell ends with one diagnostic row: residuals, drifts, fitted constants.
A Logger prints that row as a small two-column table and appends it to
``<output_dir>/progress.csv``. Result tables proper are written by
``todalab.lab.report.ReportTable``; this module only carries the running diagnostics.
"""
import atexit
import json
import os
from typing import Callable

import numpy as np

from todalab.utils.serialization_utils import convert_json

ANSI_COLORS = dict(gray=30, red=31, green=32, yellow=33, blue=34, magenta=35, cyan=36, white=37, crimson=38)


def colorize(string, color, bold=False, highlight=False):
    code = ANSI_COLORS[color] + (10 if highlight else 0)
    attrs = [str(code)] + (['1'] if bold else [])
    return f'\x1b[{";".join(attrs)}m{string}\x1b[0m'


def log(msg, color='green'):
    print(colorize(msg, color, bold=True))


def statistics_scalar(x, with_min_and_max=False):
    """
    Mean and population standard deviation of the samples in ``x``, optionally followed
    by min and max. An empty sample gives nan statistics and (inf, -inf) extremes.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size == 0:
        stats = (np.nan, np.nan, np.inf, -np.inf)
    else:
        stats = (x.mean(), x.std(), x.min(), x.max())
    return stats if with_min_and_max else stats[:2]


class Logger:
    """
    Row-oriented diagnostics writer.

    The keys of the first row fix the columns of the file. Later rows may leave a column
    empty but may not add one.

    Args:
        output_dir: directory of ``output_fname`` and ``config.json``. ``None`` keeps
            everything in memory.
        output_fname: name of the diagnostics file.
        exp_name: stored next to the config.
        verbose: echo rows and messages to stdout.
    """

    def __init__(self, output_dir=None, output_fname='progress.csv', exp_name=None, verbose=True):
        self.output_dir = output_dir
        self.exp_name = exp_name
        self.verbose = verbose
        self.columns = []
        self.row = {}
        self.rows_written = 0
        self.output_file = None
        if output_dir is not None:
            os.makedirs(output_dir, exist_ok=True)
            self.output_file = open(os.path.join(output_dir, output_fname), 'w')
            atexit.register(self.output_file.close)
            self.log(f'Logging diagnostics to {self.output_file.name}')

    def log(self, msg, color='green'):
        if self.verbose:
            log(msg, color)

    def log_tabular(self, key, val):
        if self.rows_written == 0:
            if key not in self.columns:
                self.columns.append(key)
        else:
            assert key in self.columns, f'Column {key} was not part of the first row'
        assert key not in self.row, f'{key} already set in this row; call dump_tabular first'
        self.row[key] = val

    def save_config(self, config):
        """ Write the run configuration as ``config.json`` and echo it. """
        config_json = convert_json(config)
        if self.exp_name is not None:
            config_json['exp_name'] = self.exp_name
        output = json.dumps(config_json, indent=4, sort_keys=True)
        if self.verbose:
            self.log('Configuration:', color='cyan')
            print(output)
        if self.output_dir is not None:
            with open(os.path.join(self.output_dir, 'config.json'), 'w') as f:
                f.write(output)

    def _print_row(self, values):
        width = max([15] + [len(key) for key in self.columns])
        rule = '-' * (width + 22)
        print(rule)
        for key, val in zip(self.columns, values):
            shown = f'{val:8.3g}' if isinstance(val, (float, np.floating)) else val
            print(f'| {key:>{width}} | {shown:>15} |')
        print(rule, flush=True)

    def dump_tabular(self):
        values = [self.row.get(key, '') for key in self.columns]
        if self.verbose:
            self._print_row(values)
        if self.output_file is not None:
            if self.rows_written == 0:
                self.output_file.write(','.join(self.columns) + '\n')
            self.output_file.write(','.join(map(str, values)) + '\n')
            self.output_file.flush()
        self.row = {}
        self.rows_written += 1


class EpochLogger(Logger):
    """
    Logger that also accumulates samples between rows.

    ``store(Residual=r)`` collects values during a cell and
    ``log_tabular('Residual', with_min_and_max=True)`` turns them into the columns
    ``AverageResidual, StdResidual, MaxResidual, MinResidual``. Callbacks added with
    ``register`` run right before each row is written; ``StopWatch`` uses that to add
    its elapsed-time column.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.samples = {}
        self.callbacks = []

    def register(self, fn: Callable):
        self.callbacks.append(fn)

    def store(self, **kwargs):
        for key, value in kwargs.items():
            if not isinstance(value, (int, float, np.number, np.ndarray)):
                raise ValueError(f'Cannot store {key} of type {type(value)}')
            self.samples.setdefault(key, []).append(np.asarray(value, dtype=np.float64).ravel())

    def get_stats(self, key):
        chunks = self.samples.get(key, [])
        return statistics_scalar(np.concatenate(chunks) if chunks else np.zeros(0), with_min_and_max=True)

    def log_tabular(self, key, val=None, with_min_and_max=False, average_only=False):
        """
        Log ``val`` directly, or summarise what was stored under ``key``.

        Args:
            key: column name, or the key used with ``store``.
            val: explicit value. Leave ``None`` to use the stored samples.
            with_min_and_max: add ``Max<key>`` and ``Min<key>``.
            average_only: log the mean under ``key`` itself and skip the deviation.
        """
        if val is not None:
            super().log_tabular(key, val)
        else:
            mean, std, x_min, x_max = self.get_stats(key)
            super().log_tabular(key if average_only else 'Average' + key, mean)
            if not average_only:
                super().log_tabular('Std' + key, std)
            if with_min_and_max:
                super().log_tabular('Max' + key, x_max)
                super().log_tabular('Min' + key, x_min)
        self.samples[key] = []

    def dump_tabular(self):
        for fn in self.callbacks:
            fn()
        super().dump_tabular()
