"""Data model of pyredlab: topologies, service distributions, modulation.

All classes in this package are immutable after construction and can be
shared between threads and processes.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from .topology import JobType, Topology, validate_topology
from .service import ServiceDistribution, ServiceKind, sample_service
from .modulation import DOLLY_1_12, CapacityModulation
from .generators import (NESTED_TYPE_SETS, geometric_capacities, is_nested,
                         linear_capacities, make_nested, make_red_d)
