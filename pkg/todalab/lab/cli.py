"""
Command line entry point::

    toda-lab run config.json [--output_dir DIR] [--workers N] [--quiet]
    toda-lab validate config.json
    toda-lab list-presets

Exit codes: 0 on success, 2 when a result violates its tolerance, 1 on any other error.

The CSV result tables depend only on the config and are byte-identical between runs. Wall
time is recorded only in the ``.meta.json`` files (``wall_time``) and in the
``progress.csv`` run log, which are therefore excluded from that guarantee.
"""
import argparse
import os.path as osp
import sys
import traceback

import pandas as pd

import todalab
from todalab.error import Error, ToleranceViolation
from todalab.infra import Seeder, StopWatch, add_subcommand
from todalab.lab.config import ExperimentConfig
from todalab.lab.experiments import run_experiment
from todalab.lab.presets import list_presets as preset_table
from todalab.logx import EpochLogger, colorize

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TOLERANCE = 2


def run(config: str, output_dir: str = None, workers: int = None, quiet: bool = False):
    """ Run one experiment and write its result tables.

    Args:
        config: path to the JSON experiment config.
        output_dir: directory for the result files; defaults to the config's ``output`` or
            to a directory named after the config next to it.
        workers: worker processes for independent cells (capped by TODA_LAB_THREADS).
        quiet: do not print progress rows.
    """
    cfg = ExperimentConfig.load(config)
    cfg.validate()
    if workers is not None:
        cfg.workers = workers
    if output_dir is None:
        output_dir = cfg.output or osp.join(osp.dirname(osp.abspath(config)), cfg.name)

    logger = EpochLogger(output_dir=output_dir, exp_name=cfg.name, verbose=not quiet)
    logger.save_config(cfg.to_dict())
    timer = StopWatch()
    timer.set_logger(logger)
    timer.start()

    result = run_experiment(cfg, logger)

    metadata = dict(experiment=cfg.experiment, config_digest=cfg.digest, version=todalab.__version__,
                    schema_version=cfg.schema_version, seed=cfg.seed, rng=Seeder.rng_name,
                    wall_time=timer.seconds())
    tables = result.tables + [result.checks_table(f'{cfg.name}.checks')]
    for table in tables:
        table.metadata = dict(metadata, columns=table.columns)
        path = table.write(output_dir)
        logger.log(f'Wrote {path}', color='cyan')
    for check in result.checks:
        logger.log(f'{"PASS" if check.passed else "FAIL"} {check.name}: {check.value:.6g} (bound {check.bound:.6g})',
                   color='green' if check.passed else 'red')
    result.raise_on_failure()
    return result


def validate(config: str):
    """ Check a config without running it.

    Args:
        config: path to the JSON experiment config.
    """
    cfg = ExperimentConfig.load(config)
    cfg.validate()
    print(colorize(f'{config}: valid {cfg.experiment} config (digest {cfg.digest})', 'green', bold=True))


def list_presets():
    """ Print the named operators and gap sets. """
    with pd.option_context('display.max_colwidth', None, 'display.width', 200):
        print(preset_table().to_string(index=False))


def get_parser():
    parser = argparse.ArgumentParser(prog='toda-lab', description='Toda lattice numerical laboratory')
    parser.add_argument('--version', action='version', version=f'%(prog)s {todalab.__version__}')
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True
    add_subcommand(subparsers, 'run', run)
    add_subcommand(subparsers, 'validate', validate)
    add_subcommand(subparsers, 'list-presets', list_presets)
    return parser


def main(argv=None) -> int:
    args = vars(get_parser().parse_args(argv))
    func = args.pop('_func')
    args.pop('command')
    try:
        func(**args)
    except ToleranceViolation as e:
        print(colorize(str(e), 'red', bold=True), file=sys.stderr)
        return EXIT_TOLERANCE
    except Error as e:
        print(colorize(f'{type(e).__name__}: {e}', 'red', bold=True), file=sys.stderr)
        return EXIT_ERROR
    except Exception as e:
        print(colorize(traceback.format_exc(), 'gray'), file=sys.stderr)
        print(colorize(f'unexpected {type(e).__name__}: {e}', 'red', bold=True), file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
