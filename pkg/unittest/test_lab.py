import json
import os
import tempfile
import unittest
from unittest import mock

import numpy as np
import pandas as pd

from todalab.error import ConfigError, ToleranceViolation, UnknownExperimentError
from todalab.lab import Check, ExperimentConfig, ExperimentResult, ReportTable, list_presets, preset_gapset, \
    preset_operator, run_experiment
from todalab.lab.cli import main


def _write_config(directory, **config):
    path = os.path.join(directory, f'{config.get("name", config["experiment"])}.json')
    with open(path, 'w') as f:
        json.dump(config, f)
    return path


class TestPresets(unittest.TestCase):
    def test_table(self):
        table = list_presets()
        row = table[table['name'] == 'p2-gap'].iloc[0]
        assert row['kind'] == 'operator'
        assert 'a=(0.6, 0.4)' in row['definition']

    def test_deterministic(self):
        assert preset_operator('p4-seed0') == preset_operator('p4-seed0')
        assert preset_operator('p4-seed0', seed=1) != preset_operator('p4-seed0')
        assert preset_gapset('synthetic-dyadic', n_gaps=5).n_gaps == 5

    def test_unknown(self):
        with self.assertRaises(ConfigError):
            preset_operator('one-gap')
        with self.assertRaises(ConfigError):
            preset_gapset('nope')


class TestConfig(unittest.TestCase):
    def test_defaults(self):
        cfg = ExperimentConfig(experiment='craig-report')
        assert cfg.name == 'craig-report'
        assert cfg.diagnostics() == []
        assert len(cfg.digest) == 64
        assert cfg.digest == ExperimentConfig.from_dict(cfg.to_dict()).digest

    def test_diagnostics_name_the_offender(self):
        cfg = ExperimentConfig(experiment='craig-report', times=[0., 1., 0.5])
        assert any('times[1]' in p for p in cfg.diagnostics())
        cfg = ExperimentConfig(experiment='craig-report', gapset=dict(E_lo=-1., E_hi=1., gaps=[[-0.2, 0.2], [0.5, 1.]]))
        assert any('gap 1 (0.5, 1.0) is not strictly inside' in p for p in cfg.diagnostics())
        cfg = ExperimentConfig(experiment='isospectrality', operator=dict(a=[0.5, -0.1], b=[0., 0.]))
        assert any('positive' in p for p in cfg.diagnostics())
        cfg = ExperimentConfig(experiment='craig-report', gapset='from-operator')
        assert cfg.diagnostics() == ['gapset "from-operator" needs an operator']

    def test_validate(self):
        with self.assertRaises(UnknownExperimentError):
            ExperimentConfig(experiment='nope').validate()
        with self.assertRaises(ConfigError):
            ExperimentConfig(experiment='craig-report', tol=-1.).validate()
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict(dict(experiment='craig-report', colour='red'))
        with self.assertRaises(ConfigError):
            ExperimentConfig.from_dict(dict(seed=0))

    def test_build(self):
        cfg = ExperimentConfig(experiment='dubrovin-vs-direct', operator=dict(preset='p2-gap'), gapset='from-operator')
        E = cfg.build_gapset()
        np.testing.assert_allclose(E.gaps[0], [-0.2, 0.2], atol=1e-10)
        cfg = ExperimentConfig(experiment='craig-report', gapset='two-gap')
        assert cfg.build_gapset().n_gaps == 2
        with self.assertRaises(ConfigError):
            ExperimentConfig(experiment='craig-report').build_gapset()


class TestReport(unittest.TestCase):
    def test_csv_format(self):
        table = ReportTable(name='t', frame=pd.DataFrame(dict(x=[0.1, 1. / 3.], n=[1, 2])))
        assert table.to_csv() == 'x,n\n0.10000000000000001,1\n0.33333333333333331,2\n'

    def test_write(self):
        with tempfile.TemporaryDirectory() as output_dir:
            table = ReportTable(name='t', frame=pd.DataFrame(dict(x=[1.5])), metadata=dict(seed=np.int64(3)))
            path = table.write(output_dir)
            with open(path) as f:
                assert f.read() == 'x\n1.5\n'
            with open(os.path.join(output_dir, 't.meta.json')) as f:
                assert json.load(f) == dict(seed=3)

    def test_checks(self):
        result = ExperimentResult()
        result.check(Check.at_most('small', 1e-9, 1e-8))
        result.check(Check.at_least('ratio', 100., 80.))
        result.raise_on_failure()
        result.check(Check.holds('flag', False))
        assert result.checks_table('c').frame['passed'].tolist() == [True, True, False]
        with self.assertRaises(ToleranceViolation):
            result.raise_on_failure()


class TestExperiments(unittest.TestCase):
    def test_unknown(self):
        with self.assertRaises(UnknownExperimentError):
            run_experiment(ExperimentConfig(experiment='nope'))

    def test_craig_report(self):
        result = run_experiment(ExperimentConfig(experiment='craig-report', gapset='two-gap', params=dict(n_pairs=200)))
        assert [t.name for t in result.tables] == ['craig-report', 'craig-report.summary', 'craig-report.running',
                                                   'craig-report.lipschitz']
        assert result.failures == []

    def test_dubrovin_vs_direct(self):
        cfg = ExperimentConfig(experiment='dubrovin-vs-direct', times=[0., 0.25, 0.5])
        result = run_experiment(cfg)
        table = result.tables[0].frame
        assert list(table['t']) == [0., 0.25, 0.5]
        assert result.failures == []

    def test_mmatrix_stationary(self):
        result = run_experiment(ExperimentConfig(experiment='mmatrix-flow', operator=dict(preset='free')))
        assert len(result.checks) == 2
        assert result.failures == []

    def test_edge_crossing(self):
        result = run_experiment(ExperimentConfig(experiment='edge-crossing', params=dict(samples=4001)))
        assert result.tables[0].frame['crossings'].tolist() == [2, 2, 2]
        assert result.failures == []

    def test_isospectrality(self):
        result = run_experiment(ExperimentConfig(experiment='isospectrality', times=[0., 0.5, 1.]))
        assert len(result.checks) == 4
        assert result.failures == []

    def test_linearization(self):
        result = run_experiment(ExperimentConfig(experiment='linearization', tol=1e-11))
        names = [c.name for c in result.checks]
        assert 'shift character residual' in names
        assert 'one circulation moves the Abel map by -2 pi' in names
        assert result.failures == []

    def test_approximation(self):
        cfg = ExperimentConfig(experiment='approximation', truncations=[2, 4, 6],
                               times=np.linspace(0., 2., 21).tolist())
        result = run_experiment(cfg)
        names = [c.name for c in result.checks]
        assert 'K_4 < K_2' in names and 'K_6 < K_4' in names
        assert result.failures == []

    def test_appendix(self):
        result = run_experiment(ExperimentConfig(experiment='appendix-a', params=dict(band_points=4)))
        table = result.tables[0].frame
        assert table['operator'].tolist() == ['free', 'p2-gap']
        assert len(result.checks) == 14
        assert result.failures == []


class TestCommandLine(unittest.TestCase):
    def test_list_presets(self):
        assert main(['list-presets']) == 0

    def test_validate(self):
        with tempfile.TemporaryDirectory() as directory:
            good = _write_config(directory, experiment='craig-report', gapset='one-gap')
            bad = _write_config(directory, experiment='craig-report', name='bad', times=[1., 0.])
            unknown = _write_config(directory, experiment='nope')
            assert main(['validate', good]) == 0
            assert main(['validate', bad]) == 1
            assert main(['validate', unknown]) == 1
            assert main(['validate', os.path.join(directory, 'missing.json')]) == 1

    def test_run_is_reproducible(self):
        with tempfile.TemporaryDirectory() as directory:
            config = _write_config(directory, experiment='craig-report', gapset='one-gap', params=dict(n_pairs=200))
            outputs, metas = [], []
            for run in ('first', 'second'):
                output_dir = os.path.join(directory, run)
                assert main(['run', config, '--output_dir', output_dir, '--quiet']) == 0
                with open(os.path.join(output_dir, 'craig-report.csv'), 'rb') as f:
                    outputs.append(f.read())
                with open(os.path.join(output_dir, 'craig-report.summary.meta.json')) as f:
                    meta = json.load(f)
                assert meta['experiment'] == 'craig-report' and meta['rng'] == 'PCG64'
                assert 'S1' in meta['columns']
                assert os.path.exists(os.path.join(output_dir, 'craig-report.checks.csv'))
                with open(os.path.join(output_dir, 'progress.csv')) as f:
                    assert 'Time (second)' in f.readline().strip().split(',')
                metas.append({k: v for k, v in meta.items() if k != 'wall_time'})
                assert meta['wall_time'] >= 0.
            assert outputs[0] == outputs[1]
            assert metas[0] == metas[1]

    def test_tolerance_exit_code(self):
        failing = ExperimentResult()
        failing.check(Check.at_most('residual', 1., 1e-8))
        with tempfile.TemporaryDirectory() as directory:
            config = _write_config(directory, experiment='craig-report')
            with mock.patch('todalab.lab.cli.run_experiment', return_value=failing):
                code = main(['run', config, '--output_dir', os.path.join(directory, 'out'), '--quiet'])
            assert code == 2
            assert os.path.exists(os.path.join(directory, 'out', 'craig-report.checks.csv'))

    def test_unexpected_exception_exit_code(self):
        with tempfile.TemporaryDirectory() as directory:
            config = _write_config(directory, experiment='craig-report')
            with mock.patch('todalab.lab.cli.run_experiment', side_effect=RuntimeError('boom')):
                code = main(['run', config, '--output_dir', os.path.join(directory, 'out'), '--quiet'])
            assert code == 1


if __name__ == '__main__':
    unittest.main()
