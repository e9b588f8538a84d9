"""State of a redundancy system between events.

Servers keep a virtual clock in service units: under PS the clock of
server s runs at mu_s / M_s, so a copy that entered at clock value v has
attained V_s - v and completes when the clock reaches v + b. FCFS and ROS
servers run the clock at mu_s while a copy is in service. Rates are
constant between events, so the next completion of a server is read off
its earliest finishing copy.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

import heapq
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..stability import lower_bound_capacities, subsystem_chain
from .config import Dispatch, Scheduling, Variant


logger = logging.getLogger(__name__)

COMPLETION_TOL = 1e-9
"""remaining service (in service units) that counts as completed"""


@dataclass
class JobRecord:
    """A job present in the system."""

    job_id: int
    job_type: int
    """index into topology.types"""
    size: float
    """service requirement b, the same for all copies"""
    arrival_time: float
    copies: set = field(default_factory=set)
    """servers currently holding a copy"""
    pending: set = field(default_factory=set)
    """servers of R(c) whose copy is not yet fully served (upper bound)"""


#
# Definition of the server classes
#


class _PSServer:
    """Processor sharing: every copy gets mu_s / M_s."""

    def __init__(self, capacity):
        self.capacity = capacity
        self.clock = 0.0
        self.members = {}
        """job id -> clock value at which the copy completes"""
        self._heap = []

    def __len__(self):
        return len(self.members)

    def add(self, job_id, size):
        finish = self.clock + size
        self.members[job_id] = finish
        heapq.heappush(self._heap, (finish, job_id))

    def remove(self, job_id):
        del self.members[job_id]
        if not self.members:
            self.clock = 0.0
            self._heap.clear()

    def advance(self, dt):
        if self.members:
            self.clock += self.capacity * dt / len(self.members)

    def copy_rates(self):
        """service rate of every copy"""
        if not self.members:
            return {}
        rate = self.capacity / len(self.members)
        return {job_id: rate for job_id in self.members}

    def remaining(self, job_id):
        return self.members[job_id] - self.clock

    def _top(self):
        heap = self._heap
        while heap and heap[0][1] not in self.members:
            heapq.heappop(heap)
        return heap[0] if heap else None

    def next_completion(self):
        """(time to the next completion, job id) or (inf, None)"""
        top = self._top()
        if top is None:
            return math.inf, None
        remaining = max(top[0] - self.clock, 0.0)
        return remaining * len(self.members) / self.capacity, top[1]

    def due(self):
        """job id of a copy with (numerically) no remaining service"""
        top = self._top()
        if top is not None and top[0] - self.clock <= COMPLETION_TOL:
            return top[1]
        return None


class _FCFSServer:
    """One copy in service at rate mu_s, the others wait in order."""

    def __init__(self, capacity, rng=None):
        self.capacity = capacity
        self.clock = 0.0
        self.serving = None
        self.finish = None
        self.rng = rng
        self._init_waiting()

    def _init_waiting(self):
        self.waiting = {}

    def _push(self, job_id, size):
        self.waiting[job_id] = size

    def _discard(self, job_id):
        del self.waiting[job_id]

    def _take(self):
        job_id = next(iter(self.waiting))
        return job_id, self.waiting.pop(job_id)

    def __len__(self):
        return len(self.waiting) + (self.serving is not None)

    def _start_next(self):
        if self.waiting:
            self.serving, size = self._take()
            self.finish = self.clock + size
        else:
            self.serving = self.finish = None
            self.clock = 0.0

    def add(self, job_id, size):
        self._push(job_id, size)
        if self.serving is None:
            self._start_next()

    def remove(self, job_id):
        if job_id == self.serving:
            self._start_next()
        else:
            self._discard(job_id)

    def advance(self, dt):
        if self.serving is not None:
            self.clock += self.capacity * dt

    def copy_rates(self):
        rates = {job_id: 0.0 for job_id in self.waiting}
        if self.serving is not None:
            rates[self.serving] = self.capacity
        return rates

    def remaining(self, job_id):
        if job_id == self.serving:
            return self.finish - self.clock
        return self.waiting[job_id]

    def next_completion(self):
        if self.serving is None:
            return math.inf, None
        return max(self.finish - self.clock, 0.0) / self.capacity, \
            self.serving

    def due(self):
        if self.serving is not None \
                and self.finish - self.clock <= COMPLETION_TOL:
            return self.serving
        return None


class _ROSServer(_FCFSServer):
    """Like FCFS, but the next copy is drawn uniformly from the queue."""

    def _init_waiting(self):
        self.waiting = {}
        self._order = []
        self._position = {}

    def _push(self, job_id, size):
        self.waiting[job_id] = size
        self._position[job_id] = len(self._order)
        self._order.append(job_id)

    def _discard(self, job_id):
        del self.waiting[job_id]
        position = self._position.pop(job_id)
        last = self._order.pop()
        if last != job_id:
            self._order[position] = last
            self._position[last] = position

    def _take(self):
        job_id = self._order[int(self.rng.integers(len(self._order)))]
        size = self.waiting[job_id]
        self._discard(job_id)
        return job_id, size


def default_bound_stage(chain, lam):
    """first stage with lam >= CAR_i, else stage 1"""
    return chain.first_saturated_stage(lam) or 1


#
# Definition of class QueueingSystem
#


class QueueingSystem:
    """Original or upper-bound system under any dispatch and scheduling.

    Parameters
    ----------
    topology : Topology
    dispatch : Dispatch
    scheduling : Scheduling
    variant : Variant
        original or upper_bound
    dispatch_rng, scheduling_rng : numpy.random.Generator, optional
        needed for Bernoulli/JSQ dispatch and ROS scheduling
    """

    def __init__(self, topology, dispatch=Dispatch.redundancy,
                 scheduling=Scheduling.ps, variant=Variant.original,
                 dispatch_rng=None, scheduling_rng=None):
        assert variant is not Variant.lower_bound, \
            "use LowerBoundSystem for the lower bound"
        self.topology = topology
        self.dispatch = dispatch
        self.scheduling = scheduling
        self.variant = variant
        self.dispatch_rng = dispatch_rng
        if scheduling is Scheduling.ps:
            self.servers = [_PSServer(mu) for mu in topology.capacities]
        elif scheduling is Scheduling.fcfs:
            self.servers = [_FCFSServer(mu) for mu in topology.capacities]
        else:
            assert scheduling_rng is not None, "ROS needs a generator"
            self.servers = [_ROSServer(mu, scheduling_rng)
                            for mu in topology.capacities]
        if variant is Variant.upper_bound:
            self.least_loaded = subsystem_chain(topology).least_loaded
        else:
            self.least_loaded = None
        self.jobs = {}
        self.type_counts = [0] * len(topology.types)
        self.completed = 0
        self._next_id = 0

    @property
    def num_jobs(self):
        return len(self.jobs)

    @property
    def is_empty(self):
        return not self.jobs

    @property
    def copies(self):
        """M_s for every server"""
        return [len(server) for server in self.servers]

    def set_capacity(self, server, capacity):
        """change mu_s; attained service of all copies is kept"""
        self.servers[server].capacity = capacity

    def route(self, job_type):
        """servers that receive a copy of a new job of this type"""
        servers = self.topology.types[job_type].servers
        if self.dispatch is Dispatch.redundancy:
            return servers
        if self.dispatch is Dispatch.bernoulli:
            return (servers[int(self.dispatch_rng.integers(len(servers)))],)
        loads = [len(self.servers[server]) for server in servers]
        shortest = [server for server, load in zip(servers, loads)
                    if load == min(loads)]
        return (shortest[int(self.dispatch_rng.integers(len(shortest)))],)

    def add_job(self, job_type, size, time):
        """Place a new job; returns its JobRecord."""
        assert size > 0, "service requirements must be positive"
        job = JobRecord(self._next_id, job_type, size, time)
        self._next_id += 1
        for server in self.route(job_type):
            self.servers[server].add(job.job_id, size)
            job.copies.add(server)
        if self.least_loaded is not None:
            job.pending = set(self.least_loaded[job_type]) & job.copies
        self.jobs[job.job_id] = job
        self.type_counts[job_type] += 1
        return job

    def advance(self, dt):
        for server in self.servers:
            server.advance(dt)

    def next_completion(self):
        """(time until the next copy completion, (server, job id))"""
        best, handle = math.inf, None
        for index, server in enumerate(self.servers):
            dt, job_id = server.next_completion()
            if dt < best:
                best, handle = dt, (index, job_id)
        return best, handle

    def attained(self, job_id):
        """server -> attained service of every copy of a job, in [0, size]"""
        job = self.jobs[job_id]
        return {server: min(job.size, max(
                    0.0, job.size - self.servers[server].remaining(job_id)))
                for server in job.copies}

    def _depart(self, job, time):
        for server in job.copies:
            self.servers[server].remove(job.job_id)
        job.copies.clear()
        del self.jobs[job.job_id]
        self.type_counts[job.job_type] -= 1
        self.completed += 1
        logger.debug("job %d of type %d departs at t=%.12g", job.job_id,
                     job.job_type, time)
        return job

    def complete(self, handle, time):
        """Finish the copy ``handle`` = (server, job id).

        Returns the departing JobRecord, or None if the job stays (upper
        bound with copies left in R(c)).
        """
        server, job_id = handle
        job = self.jobs[job_id]
        if self.variant is Variant.upper_bound:
            self.servers[server].remove(job_id)
            job.copies.discard(server)
            job.pending.discard(server)
            if job.pending:
                return None
        return self._depart(job, time)

    def settle(self, time, handle=None):
        """Complete ``handle`` and every other copy that is due.

        Returns
        -------
        list of JobRecord
            the jobs that left
        """
        departed = []
        if handle is not None and handle[1] in self.jobs:
            job = self.complete(handle, time)
            if job is not None:
                departed.append(job)
        progress = True
        while progress:
            progress = False
            for index, server in enumerate(self.servers):
                job_id = server.due()
                if job_id is not None:
                    job = self.complete((index, job_id), time)
                    if job is not None:
                        departed.append(job)
                    progress = True
        return departed


#
# Definition of class LowerBoundSystem
#


class LowerBoundSystem:
    """Lower-bound system built on stage i.

    Only types of C_i are admitted. Server s has capacity
    mu_s^LB = CAR_i * sum_{c in C_i(s)} p_c and every copy of a type-c
    job is served at phi_c = max_{s in c} mu_s^LB / M_s, so all copies of
    a job progress together. Each type keeps one virtual clock.
    """

    variant = Variant.lower_bound

    def __init__(self, topology, stage, chain=None):
        chain = chain or subsystem_chain(topology)
        self.topology = topology
        self.stage = stage
        self.capacities = lower_bound_capacities(chain, stage)
        self.active_types = frozenset(chain.stage(stage).types)
        self.jobs = {}
        self.type_counts = [0] * len(topology.types)
        self.completed = 0
        self._copies = np.zeros(topology.num_servers, dtype=int)
        self._clocks = [0.0] * len(topology.types)
        self._members = [{} for _ in topology.types]
        self._heaps = [[] for _ in topology.types]
        self._next_id = 0

    @property
    def num_jobs(self):
        return len(self.jobs)

    @property
    def is_empty(self):
        return not self.jobs

    @property
    def copies(self):
        return [int(count) for count in self._copies]

    def type_rate(self, job_type):
        """phi_c for a type with jobs present"""
        return max(self.capacities[server] / self._copies[server]
                   for server in self.topology.types[job_type].servers)

    def add_job(self, job_type, size, time):
        """Admit a job of C_i; returns None for other types."""
        if job_type not in self.active_types:
            return None
        job = JobRecord(self._next_id, job_type, size, time)
        self._next_id += 1
        finish = self._clocks[job_type] + size
        self._members[job_type][job.job_id] = finish
        heapq.heappush(self._heaps[job_type], (finish, job.job_id))
        servers = self.topology.types[job_type].servers
        job.copies.update(servers)
        self._copies[list(servers)] += 1
        self.jobs[job.job_id] = job
        self.type_counts[job_type] += 1
        return job

    def _busy_types(self):
        return [job_type for job_type in self.active_types
                if self._members[job_type]]

    def advance(self, dt):
        rates = [(job_type, self.type_rate(job_type))
                 for job_type in self._busy_types()]
        for job_type, rate in rates:
            self._clocks[job_type] += rate * dt

    def _top(self, job_type):
        heap, members = self._heaps[job_type], self._members[job_type]
        while heap and heap[0][1] not in members:
            heapq.heappop(heap)
        return heap[0] if heap else None

    def next_completion(self):
        """(time until the next job completion, (type, job id))"""
        best, handle = math.inf, None
        for job_type in sorted(self._busy_types()):
            finish, job_id = self._top(job_type)
            remaining = max(finish - self._clocks[job_type], 0.0)
            dt = remaining / self.type_rate(job_type)
            if dt < best:
                best, handle = dt, (job_type, job_id)
        return best, handle

    def complete(self, handle, time):
        job_type, job_id = handle
        job = self.jobs.pop(job_id)
        del self._members[job_type][job_id]
        if not self._members[job_type]:
            self._clocks[job_type] = 0.0
            self._heaps[job_type].clear()
        self._copies[list(job.copies)] -= 1
        job.copies.clear()
        self.type_counts[job_type] -= 1
        self.completed += 1
        return job

    def settle(self, time, handle=None):
        departed = []
        if handle is not None and handle[1] in self.jobs:
            departed.append(self.complete(handle, time))
        progress = True
        while progress:
            progress = False
            for job_type in sorted(self._busy_types()):
                finish, job_id = self._top(job_type)
                if finish - self._clocks[job_type] <= COMPLETION_TOL:
                    departed.append(self.complete((job_type, job_id), time))
                    progress = True
        return departed


def build_system(config, streams, chain=None):
    """System for a SimConfig, drawing randomness from ``streams``."""
    if config.variant is Variant.lower_bound:
        chain = chain or subsystem_chain(config.topology)
        stage = config.bound_stage or default_bound_stage(chain, config.lam)
        return LowerBoundSystem(config.topology, stage, chain)
    return QueueingSystem(config.topology, config.dispatch,
                          config.scheduling, config.variant,
                          dispatch_rng=streams["dispatch"],
                          scheduling_rng=streams["scheduling"])
