from .logging import LogUser
