from .commandline_utils import get_argparser_from_func, add_subcommand
from .run_utils import run_cells, num_workers
