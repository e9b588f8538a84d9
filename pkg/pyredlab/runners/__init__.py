"""Discrete-event simulation of redundancy systems.

Runner owns the event loop; QueueingSystem and LowerBoundSystem hold the
state of the original, upper-bound and lower-bound systems.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from .config import Dispatch, Scheduling, SimConfig, Variant
from .arrivals import Arrival, ArrivalStream
from .hooks import HookRegistrationError, Hooks
from .system import (COMPLETION_TOL, JobRecord, LowerBoundSystem,
                     QueueingSystem, build_system, default_bound_stage)
from .statistics import (DriftTest, RegenerativeEstimator, drift_test,
                         slope_test)
from .runner import (Runner, SimResult, run, run_fluid_scaled,
                     run_trajectory)
from .bounds import BoundsReport, BoundViolation, run_coupled_bounds
from .frontier import (DriftMonitor, FrontierPoint,
                       estimate_stability_frontier)
