from abc import ABC, abstractmethod


class LogUser(ABC):
    """ An object that adds its own columns to every row a Logger dumps. """

    def __init__(self):
        self.logger = None

    def set_logger(self, logger):
        self.logger = logger
        self.logger.register(self.log_tabular)

    @abstractmethod
    def log_tabular(self):
        raise NotImplementedError
