"""
Test infrastructure
"""

import argparse
import os
import tempfile
import unittest
from dataclasses import dataclass
from unittest import mock

import numpy as np

import todalab.infra as lab_infra
from todalab.logx import EpochLogger
from todalab.utils.serialization_utils import config_digest, convert_json


def _cell(x, y=1):
    return x * y


@dataclass
class _Point:
    x: float
    tags: tuple


class TestInfra(unittest.TestCase):
    def test_seeder(self):
        first = lab_infra.Seeder(7).np_random.uniform(size=5)
        second = lab_infra.Seeder(7).np_random.uniform(size=5)
        np.testing.assert_array_equal(first, second)
        seeder = lab_infra.Seeder(7)
        seeder.np_random.uniform(size=3)
        seeder.reset()
        np.testing.assert_array_equal(seeder.np_random.uniform(size=5), first)
        assert lab_infra.Seeder.rng_name == 'PCG64'

    def test_num_workers(self):
        with mock.patch.dict(os.environ, {'TODA_LAB_THREADS': '1'}):
            assert lab_infra.num_workers() == 1
            assert lab_infra.num_workers(8) == 1
        with mock.patch.dict(os.environ, {'TODA_LAB_THREADS': ''}):
            assert lab_infra.num_workers(1) == 1
            assert lab_infra.num_workers(0) == 1

    def test_run_cells_keeps_order(self):
        cells = [dict(x=i, y=i + 1) for i in range(6)]
        assert lab_infra.run_cells(_cell, cells, workers=1, verbose=False) == [i * (i + 1) for i in range(6)]
        assert lab_infra.run_cells(_cell, [], workers=1, verbose=False) == []

    def test_argparser_from_func(self):
        def func(config: str, output_dir: str = None, workers: int = None, quiet: bool = False, tol=1e-10):
            """ A command.

            Args:
                config: path to the config.
                quiet: no output.
            """

        parser = lab_infra.get_argparser_from_func(func)
        args = vars(parser.parse_args(['a.json', '--workers', '3', '--quiet', '--tol', '1e-8']))
        assert args == dict(config='a.json', output_dir=None, workers=3, quiet=True, tol=1e-8)

        def bad(x=None):
            pass

        with self.assertRaises(ValueError):
            lab_infra.get_argparser_from_func(bad)

    def test_add_subcommand(self):
        def hello(name: str):
            """ Say hello. """

        parser = argparse.ArgumentParser()
        subparsers = parser.add_subparsers(dest='command')
        lab_infra.add_subcommand(subparsers, 'hello', hello)
        args = vars(parser.parse_args(['hello', 'world']))
        assert args['_func'] is hello and args['name'] == 'world'


class TestSerialization(unittest.TestCase):
    def test_convert_json(self):
        data = dict(a=np.arange(3), b=np.float64(0.5), c=1 + 2j, d=_Point(x=1., tags=('u', 'v')))
        assert convert_json(data) == dict(a=[0, 1, 2], b=0.5, c=dict(real=1., imag=2.),
                                          d=dict(x=1., tags=('u', 'v')))

    def test_config_digest(self):
        assert config_digest(dict(a=1, b=[1., 2.])) == config_digest(dict(b=[1., 2.], a=1))
        assert config_digest(dict(a=1)) != config_digest(dict(a=2))
        assert len(config_digest({})) == 64


class TestLogger(unittest.TestCase):
    def test_store_and_callbacks(self):
        with tempfile.TemporaryDirectory() as output_dir:
            logger = EpochLogger(output_dir=output_dir, verbose=False)
            timer = lab_infra.StopWatch()
            timer.set_logger(logger)
            timer.start()
            logger.store(Residual=1.)
            logger.store(Residual=np.array([2., 3.]))
            logger.log_tabular('Residual', with_min_and_max=True)
            logger.dump_tabular()
            logger.output_file.close()
            with open(os.path.join(output_dir, 'progress.csv')) as f:
                header, row = f.read().splitlines()
            assert header.split(',') == ['AverageResidual', 'StdResidual', 'MaxResidual', 'MinResidual',
                                         'Time (second)']
            np.testing.assert_allclose([float(v) for v in row.split(',')[:4]], [2., np.sqrt(2. / 3.), 3., 1.])

    def test_new_key_after_first_row(self):
        logger = EpochLogger(verbose=False)
        logger.log_tabular('A', 1.)
        logger.dump_tabular()
        with self.assertRaises(AssertionError):
            logger.log_tabular('B', 1.)


if __name__ == '__main__':
    unittest.main()
