"""Fluid models of the bound systems for exponential services."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from .drain import (DrainEvent, FluidTrajectory, server_mass,
                    ub_drain_schedule)
from .alpha import AlphaTrajectory, lb_alpha_trajectory
from .drifts import classify_drifts
