"""
Infrastructure shared by the experiments:
- Seeder. Deterministic random streams
- StopWatch. Wall time of a run
- Runner. Command line helpers and the cell pool
"""

from . import runner
from .runner import add_subcommand, get_argparser_from_func, num_workers, run_cells
from .seeder import Seeder
from .timer import StopWatch
