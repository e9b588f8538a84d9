"""Event loop of the redundancy simulator."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

import logging
import math
from dataclasses import dataclass
from time import time as wall_clock

import numpy as np

from ..private import TrajectoryDictionary
from ..util import make_streams
from .arrivals import ArrivalStream
from .hooks import Hooks
from .statistics import RegenerativeEstimator
from .system import build_system


logger = logging.getLogger(__name__)

PROGRESS_EVERY = 10 ** 6
"""events between two progress messages"""

ARRIVAL, DEPARTURE, RING = "arrival", "departure", "ring"


#
# Definition of class SimResult
#


@dataclass(frozen=True)
class SimResult:
    """Outcome of one simulation run."""

    mean_jobs: float
    """time-average number of jobs (a lower bound if diverged)"""
    ci_half_width: float
    """half-width of the 95% confidence interval, inf if unavailable"""
    per_server_mean_copies: tuple
    completed_jobs: int
    diverged: bool
    cycles: int = 0
    events: int = 0
    simulated_time: float = 0.0
    trajectory: TrajectoryDictionary = None
    """time, M_1..M_K at every event (trajectory runs only)"""

    def to_dict(self):
        """JSON representation; an infinite half-width becomes null"""
        return {
            "mean_jobs": self.mean_jobs,
            "ci_half_width": (self.ci_half_width
                              if math.isfinite(self.ci_half_width)
                              else None),
            "per_server_mean_copies": list(self.per_server_mean_copies),
            "completed_jobs": self.completed_jobs,
            "diverged": self.diverged,
            "cycles": self.cycles,
            "events": self.events,
            "simulated_time": self.simulated_time,
        }


#
# Definition of class Runner
#


class Runner:
    """Runner-class, it owns the event loop of one simulated system.

    Between events all rates are constant. The next event is the earliest
    of the next arrival, the next modulation ring and the next copy
    completion, which is recomputed after every event.
    """

    def __init__(self,
                 config,
                 *,
                 hooks=None,
                 record_trajectory=False,
                 termination_calls=None):
        """Instantiate a Runner.

        Parameters
        ----------
        config : SimConfig
            the run to carry out
        hooks : Hooks, optional
            hooks called as hook(runner, t)
        record_trajectory : bool
            record (time, M_1..M_K) at every event
        termination_calls : list, optional
            callables runner -> bool; the run stops early once one of them
            returns True
        """
        self.config = config
        self.topology = config.topology
        self.streams = make_streams(config.seed)
        self.arrival_stream = ArrivalStream(
            self.topology, config.service, self.streams["arrivals"],
            self.streams["sizes"])
        self.system = build_system(config, self.streams)
        self.hooks = hooks if hooks is not None else Hooks()
        self.termination_calls = termination_calls or []
        self.time = 0.0
        self.events = 0
        self.area = 0.0
        self.server_area = np.zeros(self.topology.num_servers)
        self.regenerated = False
        """whether the last event was an arrival to an empty system"""
        self.trajectory = None
        if record_trajectory:
            self.trajectory = TrajectoryDictionary(
                ["time"] + ["M_{}".format(server + 1) for server
                            in range(self.topology.num_servers)])
        self._setup_modulation()
        self._place_initial_state()
        self.next_arrival = self.arrival_stream.next()

    def _setup_modulation(self):
        modulation = self.config.modulation
        self.base_capacities = self.topology.capacities
        self.rings = np.full(self.topology.num_servers, math.inf)
        if modulation is None:
            return
        rng = self.streams["modulation"]
        for server, mu in enumerate(self.base_capacities):
            self.system.set_capacity(server,
                                     mu / modulation.sample_slowdown(rng))
            self.rings[server] = modulation.next_ring(rng)

    def _place_initial_state(self):
        if not self.config.initial_state:
            return
        rng = self.streams["initial"]
        for job_type, count in enumerate(self.config.initial_state):
            for _ in range(count):
                self.system.add_job(job_type,
                                    self.config.service.sample(rng), 0.0)

    def _record(self):
        if self.trajectory is not None:
            self.trajectory.append(self.time, *self.system.copies)

    def _advance(self, dt):
        if dt > 0:
            self.area += self.system.num_jobs * dt
            self.server_area += np.array(self.system.copies) * dt
            self.system.advance(dt)
            self.time += dt

    def step(self, until=math.inf):
        """Process the next event if it happens no later than ``until``.

        Returns
        -------
        str or None
            the kind of event, or None if there was none (the clock is
            then moved to ``until`` if that is finite)
        """
        dt_completion, handle = self.system.next_completion()
        t_completion = self.time + dt_completion
        t_arrival = (self.next_arrival.time if self.next_arrival is not None
                     else math.inf)
        ring_server = int(np.argmin(self.rings))
        t_ring = self.rings[ring_server]
        t_next = min(t_completion, t_arrival, t_ring)
        if t_next > until or t_next == math.inf:
            if math.isfinite(until):
                self._advance(until - self.time)
            return None
        self._advance(t_next - self.time)
        self.regenerated = False
        if t_completion <= t_arrival and t_completion <= t_ring:
            kind = DEPARTURE
            self.system.settle(self.time, handle)
        elif t_arrival <= t_ring:
            kind = ARRIVAL
            arrival = self.next_arrival
            was_empty = self.system.is_empty
            job = self.system.add_job(arrival.job_type, arrival.size,
                                      self.time)
            self.regenerated = was_empty and job is not None
            self.next_arrival = self.arrival_stream.next()
        else:
            kind = RING
            modulation = self.config.modulation
            rng = self.streams["modulation"]
            self.system.set_capacity(
                ring_server, self.base_capacities[ring_server]
                / modulation.sample_slowdown(rng))
            self.rings[ring_server] = self.time + modulation.next_ring(rng)
        self.events += 1
        self._record()
        self.hooks.execute_hooks(Hooks.Types.mid, self, self.time)
        if self.events % PROGRESS_EVERY == 0:
            logger.info("  %d events, t=%.6g, %d jobs", self.events,
                        self.time, self.system.num_jobs)
        return kind

    def _terminate(self):
        return any(call(self) for call in self.termination_calls)

    def _empty_result(self):
        return SimResult(0.0, 0.0, tuple([0.0] * self.topology.num_servers),
                         0, False)

    def run(self):
        """Run until enough regeneration cycles are collected.

        Cycles start at arrivals that find the system empty. The first
        ``warmup_periods`` cycles are discarded.

        Returns
        -------
        SimResult
        """
        config = self.config
        if config.lam == 0 and self.system.is_empty:
            return self._empty_result()
        logger.info("Running %s/%s (%s) at lambda=%.6g until %d busy "
                    "periods", config.dispatch.value, config.scheduling.value,
                    config.variant.value, config.lam, config.busy_periods)
        started = wall_clock()
        self.hooks.execute_hooks(Hooks.Types.pre, self, self.time)
        estimator = RegenerativeEstimator(self.topology.num_servers)
        closed = 0
        cycle_start = None
        diverged = False
        while estimator.num_cycles < config.busy_periods:
            if self.events >= config.max_events:
                diverged = True
                logger.warning("stopping after %d events (max_events); "
                               "reporting a lower bound", self.events)
                break
            if self.step() is None or self._terminate():
                break
            if not self.regenerated:
                continue
            if cycle_start is not None:
                closed += 1
                if closed > config.warmup_periods:
                    start_time, start_area, start_servers = cycle_start
                    estimator.add_cycle(self.area - start_area,
                                        self.time - start_time,
                                        self.server_area - start_servers)
            cycle_start = (self.time, self.area, self.server_area.copy())
        self.hooks.execute_hooks(Hooks.Types.post, self, self.time)
        logger.info("  ...took %.3g seconds for %d events", wall_clock()
                    - started, self.events)
        if estimator.num_cycles and not diverged:
            mean = estimator.mean()
            half_width = estimator.half_width()
            per_server = estimator.per_server_mean()
        else:
            span = self.time if self.time > 0 else 1.0
            mean = self.area / span
            half_width = math.inf
            per_server = self.server_area / span
        return SimResult(mean, half_width,
                         tuple(float(value) for value in per_server),
                         self.system.completed, diverged,
                         estimator.num_cycles, self.events, self.time)

    def run_for(self, *, horizon=math.inf, events=None):
        """Run until ``horizon`` or a number of events, whichever is first.

        Returns
        -------
        SimResult
            time averages over the run, no confidence interval
        """
        limit = self.config.max_events if events is None else events
        self.hooks.execute_hooks(Hooks.Types.pre, self, self.time)
        self._record()
        diverged = False
        while True:
            if self.events >= limit:
                diverged = events is None
                break
            if self.step(until=horizon) is None or self._terminate():
                break
        if math.isfinite(horizon) and self.time == horizon \
                and self.trajectory is not None \
                and self.trajectory["time"][-1] != horizon:
            self._record()
        self.hooks.execute_hooks(Hooks.Types.post, self, self.time)
        span = self.time if self.time > 0 else 1.0
        return SimResult(self.area / span, math.inf,
                         tuple(float(value)
                               for value in self.server_area / span),
                         self.system.completed, diverged, 0, self.events,
                         self.time, self.trajectory)


def run(config, hooks=None):
    """Simulate until ``config.busy_periods`` cycles are collected."""
    return Runner(config, hooks=hooks).run()


def run_trajectory(config, horizon, hooks=None):
    """Simulate up to ``horizon`` and record M_1..M_K at every event."""
    assert horizon > 0, "horizon must be positive"
    return Runner(config, hooks=hooks, record_trajectory=True).run_for(
        horizon=horizon)


def run_fluid_scaled(config, scale, type_mass, horizon):
    """Fluid-scaled trajectory M(scale * t) / scale.

    The initial state holds round(scale * n_c) jobs of every type.

    Returns
    -------
    (numpy.ndarray, numpy.ndarray)
        times and copies per server (shape events x servers), both scaled
    """
    initial = tuple(int(round(scale * mass)) for mass in type_mass)
    result = run_trajectory(config.replace(initial_state=initial),
                            scale * horizon)
    table = result.trajectory
    times = np.array(table["time"]) / scale
    masses = np.column_stack([table[column] for column in table.columns[1:]])
    return times, masses / scale
