"""Fluid drain schedule of the upper-bound system (exponential services).

In the upper-bound system a job leaves only when all its copies on its
least-loaded servers R(c) are served. The fluid mass of the servers is
then driven stage by stage: once the servers of stages 1..i-1 are empty,
the servers of L_i behave like processor-sharing queues fed by the types
of C_i, with constant drift lambda * sum_{c in C_i(s)} p_c - mu_s.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, FluidError
from ..private import TrajectoryDictionary
from ..stability import subsystem_chain
from ..util import compare


logger = logging.getLogger(__name__)

HORIZON_FACTOR = 5.0
"""default horizon as a multiple of the last drain time"""

ZERO_MASS = 1e-12
"""fluid mass below this value counts as empty"""


@dataclass(frozen=True)
class DrainEvent:
    """Time at which a set of servers becomes empty for good."""

    time: float
    servers: tuple
    """0-based indices of the emptied servers"""
    stage: int
    """stage whose phase ended (None for servers that host no type)"""

    def to_dict(self):
        return {"time": self.time, "servers": list(self.servers),
                "stage": self.stage}


#
# Definition of class FluidTrajectory
#


@dataclass(frozen=True)
class FluidTrajectory:
    """Piecewise-linear per-server fluid mass."""

    times: tuple
    """breakpoints, increasing, starting at 0"""
    masses: tuple
    """per breakpoint a tuple with the mass of every server"""
    drain_events: tuple = ()
    stalled_stage: int = None
    """first stage that does not drain at the given arrival rate"""

    @property
    def horizon(self):
        return self.times[-1]

    @property
    def num_servers(self):
        return len(self.masses[0])

    def mass_array(self):
        """masses as an array of shape (breakpoints, servers)"""
        return np.array(self.masses)

    def mass_at(self, time):
        """per-server mass at ``time`` (array); scalars or arrays of times"""
        masses = self.mass_array()
        values = [np.interp(time, self.times, masses[:, server])
                  for server in range(self.num_servers)]
        return np.array(values)

    def drain_time(self, server):
        """time of the drain event containing ``server``, or None"""
        for event in self.drain_events:
            if server in event.servers:
                return event.time
        return None

    def to_trajectory_dictionary(self):
        """long format: one row per breakpoint and server (1-based)"""
        table = TrajectoryDictionary(("time", "server", "mass"))
        for time, masses in zip(self.times, self.masses):
            for server, mass in enumerate(masses):
                table.append(time, server + 1, mass)
        return table

    def save(self, *, filename, path='./', data_type='csv'):
        """write the long-format table, see TrajectoryDictionary.save"""
        return self.to_trajectory_dictionary().save(
            filename=filename, path=path, data_type=data_type)


def server_mass(topology, type_mass):
    """Copy mass per server for given per-type job mass.

    Every job has a copy on each of its servers, so server s holds
    sum_{c containing s} n_c.
    """
    if len(type_mass) != len(topology.types):
        raise ConfigurationError(
            "expected {} type masses, got {}".format(len(topology.types),
                                                     len(type_mass)),
            field="initial_types")
    masses = np.zeros(topology.num_servers)
    for job_type, mass in zip(topology.types, type_mass):
        for server in job_type.servers:
            masses[server] += mass
    return masses


def _check_exponential(service):
    if service is not None and not service.is_exponential:
        raise FluidError("the fluid model needs exponential services, got "
                         "{}".format(service.kind.value))


class _PiecewiseBuilder:
    """Collects breakpoints while integrating constant slopes."""

    def __init__(self, masses):
        self.time = 0.0
        self.masses = np.array(masses, dtype=float)
        self.times = [0.0]
        self.records = [tuple(self.masses)]

    def _record(self):
        if self.time > self.times[-1]:
            self.times.append(self.time)
            self.records.append(tuple(self.masses))
        else:
            self.records[-1] = tuple(self.masses)

    def advance(self, slopes, until):
        """Integrate until ``until``; masses stop at zero."""
        slopes = np.array(slopes, dtype=float)
        while self.time < until:
            falling = (self.masses > 0) & (slopes < 0)
            hits = np.full(len(self.masses), np.inf)
            hits[falling] = self.time + self.masses[falling] \
                / -slopes[falling]
            step_end = min(until, hits.min())
            effective = np.where((self.masses <= 0) & (slopes < 0), 0.0,
                                 slopes)
            self.masses = self.masses + effective * (step_end - self.time)
            self.masses[hits <= step_end] = 0.0
            self.masses[self.masses < ZERO_MASS] = 0.0
            self.time = step_end
            self._record()

    def clear(self, servers):
        """set the mass of the given servers to zero at the current time"""
        self.masses[list(servers)] = 0.0
        self._record()

    def trajectory(self, events, stalled_stage, horizon):
        times = np.array(self.times)
        masses = np.array(self.records)
        if horizon < times[-1]:
            keep = times < horizon
            cut = np.array([np.interp(horizon, times, masses[:, server])
                            for server in range(masses.shape[1])])
            times = np.append(times[keep], horizon)
            masses = np.vstack([masses[keep], cut])
            events = [event for event in events if event.time <= horizon]
        return FluidTrajectory(tuple(float(t) for t in times),
                               tuple(tuple(float(m) for m in row)
                                     for row in masses),
                               tuple(events), stalled_stage)


def ub_drain_schedule(topology, initial_mass, horizon=None, service=None):
    """Fluid trajectory of the upper-bound system.

    Phase i starts when the servers of L_1..L_{i-1} are empty. During
    phase i every server whose home stage is at least i moves with slope
    lambda * sum_{c in C_i(s)} p_c - mu_s (types of earlier stages no
    longer count); servers past their home stage drain at mu_s. A server
    that is never least-loaded is emptied together with the last stage
    hosting its types, or earlier if its own slope is steeper. The phase
    ends when all of L_i is empty.

    Parameters
    ----------
    topology : Topology
        arrival rate taken from topology.lam
    initial_mass : sequence of float
        fluid copy mass of every server at time 0
    horizon : float, optional
        end of the trajectory; defaults to 5 times the last drain time
    service : ServiceDistribution, optional
        must be exponential if given

    Returns
    -------
    FluidTrajectory
        with stalled_stage set if some stage i has lambda >= CAR_i
    """
    _check_exponential(service)
    num_servers = topology.num_servers
    if len(initial_mass) != num_servers or min(initial_mass) < 0:
        raise ConfigurationError(
            "need {} non-negative masses".format(num_servers),
            field="initial_mass")
    if horizon is not None and horizon <= 0:
        raise ConfigurationError("must be positive", field="horizon")
    lam = topology.lam
    capacities = np.array(topology.capacities)
    chain = subsystem_chain(topology)
    home = [chain.home_stage(server) for server in range(num_servers)]
    removed = chain.removed_servers()
    builder = _PiecewiseBuilder(initial_mass)
    events = []
    stalled = None

    for stage in chain.stages:
        loads = np.zeros(num_servers)
        for index in stage.types:
            for server in topology.types[index].servers:
                loads[server] += topology.types[index].p
        slopes = np.where(loads > 0, lam * loads - capacities, -capacities)
        if compare(lam, stage.car) >= 0:
            stalled = stage.number
            logger.warning("stage %d does not drain: lambda=%.12g >= "
                           "CAR=%.12g", stage.number, lam, stage.car)
            break
        least = sorted(stage.least_loaded)
        phase_length = max(builder.masses[server] / -slopes[server]
                           for server in least)
        followers = [server for server in range(num_servers)
                     if home[server] == stage.number
                     and server not in removed]
        if phase_length > 0:
            for server in followers:
                slopes[server] = min(slopes[server],
                                     -builder.masses[server] / phase_length)
        builder.advance(slopes, builder.time + phase_length)
        emptied = least + (followers if phase_length > 0 else [
            server for server in followers if builder.masses[server] == 0])
        builder.clear(emptied)
        events.append(DrainEvent(builder.time, tuple(sorted(emptied)),
                                 stage.number))
        logger.debug("phase %d drained at t=%.12g", stage.number,
                     builder.time)

    if stalled is None:
        # past their home stage all servers only serve what they hold
        leftover = [server for server in range(num_servers)
                    if builder.masses[server] > 0]
        if leftover:
            slopes = -capacities
            builder.advance(slopes, builder.time + max(
                builder.masses[server] / capacities[server]
                for server in leftover))
            events.append(DrainEvent(builder.time, tuple(leftover), None))
        last_drain = builder.time
        if horizon is None:
            horizon = HORIZON_FACTOR * last_drain if last_drain > 0 else 1.0
    else:
        if horizon is None:
            horizon = HORIZON_FACTOR * max(
                builder.time, 1.0,
                max(mass / mu for mass, mu in zip(initial_mass,
                                                  topology.capacities)))
        builder.advance(slopes, horizon)
    if horizon > builder.time:
        builder.advance(np.zeros(num_servers) if stalled is None else slopes,
                        horizon)
    assert all(math.isfinite(t) for t in builder.times)
    return builder.trajectory(events, stalled, horizon)
