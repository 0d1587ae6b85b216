from .config import config
from .logger import logger
from . import errors

__all__ = ['config', 'logger', 'errors']
