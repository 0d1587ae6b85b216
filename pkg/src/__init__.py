__version__ = "0.1.0"

from . import utils
from . import curves
from . import energy
from . import gradient
from . import spectral
from . import combinatorics
from . import majorants
from . import flow

__all__ = ['utils', 'curves', 'energy', 'gradient', 'spectral', 'combinatorics', 'majorants', 'flow',
           '__version__']
