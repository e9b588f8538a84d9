"""Fluid dynamics of the lower-bound system.

In the lower-bound system built on stage i all servers of S_i carry the
same normalized mass alpha(t) = m_s(t) / mu_s^LB, which behaves like the
fluid limit of a single processor-sharing queue with arrival rate
lambda / CAR_i and unit speed.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, FluidError, StabilityError
from ..stability import subsystem_chain
from ..util import compare
from .drain import _check_exponential


@dataclass(frozen=True)
class AlphaTrajectory:
    """Piecewise-linear alpha(t) with absorption at zero."""

    alpha0: float
    slope: float
    """lambda / CAR_i - 1"""
    horizon: float
    times: tuple
    values: tuple

    @property
    def diverges(self):
        """whether alpha grows without bound"""
        return self.slope > 0

    def value_at(self, time):
        return np.interp(time, self.times, self.values)


def lb_alpha_trajectory(topology, stage, alpha0, horizon, service=None):
    """alpha(t) of the lower-bound system built on a stage.

    Parameters
    ----------
    topology : Topology
        arrival rate taken from topology.lam
    stage : int
        1-based stage number, at most i*
    alpha0 : float
        alpha(0) >= 0
    horizon : float
        end time > 0
    service : ServiceDistribution, optional
        must be exponential if given

    Returns
    -------
    AlphaTrajectory
    """
    _check_exponential(service)
    if alpha0 < 0:
        raise ConfigurationError("must be non-negative", field="alpha0")
    if horizon <= 0:
        raise ConfigurationError("must be positive", field="horizon")
    try:
        car = subsystem_chain(topology).stage(stage).car
    except StabilityError as error:
        raise FluidError(str(error)) from error
    lam = topology.lam
    slope = 0.0 if compare(lam, car) == 0 else lam / car - 1.0
    if slope >= 0 or alpha0 == 0:
        end = alpha0 + max(slope, 0.0) * horizon
        times, values = (0.0, horizon), (alpha0, end)
    else:
        hit = alpha0 / -slope
        if hit >= horizon:
            times, values = (0.0, horizon), (alpha0, alpha0 + slope * horizon)
        else:
            times, values = (0.0, hit, horizon), (alpha0, 0.0, 0.0)
    return AlphaTrajectory(float(alpha0), slope, float(horizon),
                           tuple(times), tuple(float(v) for v in values))
