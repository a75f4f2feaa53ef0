import time

from todalab.interface.logging import LogUser

_UNIT_SECONDS = dict(second=1., minute=60., hour=3600.)


class StopWatch(LogUser):
    """ Wall time since ``start``, added as a ``Time (<unit>)`` column to every logged row. """

    def __init__(self, display='second'):
        super(StopWatch, self).__init__()
        if display not in _UNIT_SECONDS:
            raise ValueError(f'display must be one of {sorted(_UNIT_SECONDS)}, got {display!r}')
        self.display = display
        self.start_time = None

    def start(self):
        self.start_time = time.perf_counter()

    def seconds(self):
        return time.perf_counter() - self.start_time

    def log_tabular(self):
        self.logger.log_tabular(f'Time ({self.display})', self.seconds() / _UNIT_SECONDS[self.display])
