"""
This is the pyredlab package.

Stability regions of redundancy systems with heterogeneous servers, a
discrete-event simulator of the stochastic system and its bounding
systems, the fluid limit of the upper-bound system and the experiments
built on top of them.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import logging

__version__ = "0.1.0"

from .errors import *
from .data_model import *
from .stability import *
from .fluid import *
from .runners import *
from .experiments import *
from .util import *

logging.getLogger(__name__).addHandler(logging.NullHandler())
