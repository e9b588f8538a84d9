"""Coupled simulation of the original system and its bound systems.

The three systems see the same arrival times, types and service
requirements. After every event the number of jobs of every type is
compared: the upper-bound system must hold at least as many jobs as the
original one, and for the types of the stage the lower bound is built on
the lower-bound system at most as many.
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

from ..errors import ConfigurationError, DominanceViolation
from ..stability import subsystem_chain
from ..util import make_streams
from .arrivals import ArrivalStream
from .config import Dispatch, Scheduling, Variant
from .system import LowerBoundSystem, QueueingSystem, default_bound_stage


logger = logging.getLogger(__name__)

DEFAULT_BOUND_EVENTS = 10 ** 4
"""events per coupled run"""

UPPER, LOWER = "upper", "lower"


@dataclass(frozen=True)
class BoundViolation:
    """First event at which a bound system failed to bound a type."""

    bound: str
    """UPPER or LOWER"""
    time: float
    event: int
    job_type: int
    original: int
    """jobs of the type in the original system"""
    bound_jobs: int
    """jobs of the type in the bound system"""

    def to_dict(self):
        return {"bound": self.bound, "time": self.time, "event": self.event,
                "type": self.job_type, "original": self.original,
                "bound_jobs": self.bound_jobs}


@dataclass(frozen=True)
class BoundsReport:
    """Outcome of one coupled run."""

    events: int
    simulated_time: float
    bound_stage: int
    upper_violations: tuple = ()
    lower_violations: tuple = ()

    @property
    def ok(self):
        return not (self.upper_violations or self.lower_violations)

    def to_dict(self):
        return {"events": self.events,
                "simulated_time": self.simulated_time,
                "bound_stage": self.bound_stage,
                "upper_violations": [v.to_dict()
                                     for v in self.upper_violations],
                "lower_violations": [v.to_dict()
                                     for v in self.lower_violations]}


def _check(original, upper, lower, active, time, event):
    violations = []
    for job_type, count in enumerate(original.type_counts):
        if count > upper.type_counts[job_type]:
            violations.append(BoundViolation(
                UPPER, time, event, job_type, count,
                upper.type_counts[job_type]))
        if job_type in active and lower.type_counts[job_type] > count:
            violations.append(BoundViolation(
                LOWER, time, event, job_type, count,
                lower.type_counts[job_type]))
    return violations


def run_coupled_bounds(config, seed=None, *, events=DEFAULT_BOUND_EVENTS,
                       raise_on_violation=True):
    """Run original, upper-bound and lower-bound systems in lockstep.

    Parameters
    ----------
    config : SimConfig
        redundancy dispatch and PS scheduling; ``bound_stage`` selects the
        lower-bound stage (default: first stage with lam >= CAR_i, else 1)
    seed : int, optional
        overrides config.seed
    events : int
        number of events (arrivals and completions in any system)
    raise_on_violation : bool
        raise DominanceViolation at the first violation

    Returns
    -------
    BoundsReport
    """
    if config.dispatch is not Dispatch.redundancy \
            or config.scheduling is not Scheduling.ps:
        raise ConfigurationError("coupled bounds need redundancy dispatch "
                                 "and PS scheduling", field="sim")
    if seed is not None:
        config = config.replace(seed=seed)
    topology = config.topology
    chain = subsystem_chain(topology)
    stage = config.bound_stage or default_bound_stage(chain, config.lam)
    streams = make_streams(config.seed)
    stream = ArrivalStream(topology, config.service, streams["arrivals"],
                           streams["sizes"])
    original = QueueingSystem(topology)
    upper = QueueingSystem(topology, variant=Variant.upper_bound)
    lower = LowerBoundSystem(topology, stage, chain)
    systems = (original, upper, lower)
    active = lower.active_types

    if config.initial_state:
        for job_type, count in enumerate(config.initial_state):
            for _ in range(count):
                size = config.service.sample(streams["initial"])
                for system in systems:
                    system.add_job(job_type, size, 0.0)

    logger.info("coupled bounds on stage %d, %d events, seed %d", stage,
                events, config.seed)
    time = 0.0
    count = 0
    upper_violations, lower_violations = [], []
    arrival = stream.next()
    while count < events:
        completions = [system.next_completion() for system in systems]
        t_arrival = arrival.time if arrival is not None else math.inf
        t_completion = min(time + dt for dt, _ in completions)
        t_next = min(t_arrival, t_completion)
        if t_next == math.inf:
            break
        before, time = time, t_next
        for system in systems:
            system.advance(time - before)
        if t_arrival <= t_completion:
            for system in systems:
                system.add_job(arrival.job_type, arrival.size, time)
            arrival = stream.next()
        else:
            # due copies of the other systems are caught by settle
            for system, (dt, handle) in zip(systems, completions):
                system.settle(time, handle if before + dt <= time else None)
        count += 1
        for violation in _check(original, upper, lower, active, time,
                                count):
            if raise_on_violation:
                raise DominanceViolation(violation)
            if violation.bound == UPPER:
                upper_violations.append(violation)
            else:
                lower_violations.append(violation)
    return BoundsReport(count, time, stage, tuple(upper_violations),
                        tuple(lower_violations))
