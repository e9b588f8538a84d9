"""Recursive subsystem decomposition of a redundancy system.

Starting from all servers, each stage computes for every server the ratio
of its capacity to the probability mass of the types that live entirely
inside the current subsystem, removes the servers attaining the maximum
ratio (the least-loaded servers) together with every type they serve,
and recurses on what is left until no type remains. The smallest of the
stage maxima is the maximum stable arrival rate under redundancy.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

import math
from dataclasses import dataclass
from enum import Enum, unique

import numpy as np

from ..errors import StabilityError
from ..util import compare


@unique
class Verdict(Enum):
    """Stability verdict of a single server at a given arrival rate."""
    stable = "stable"
    unstable = "unstable"
    critical = "critical"


#
# Definition of class Stage
#


@dataclass(frozen=True)
class Stage:
    """One level of the subsystem recursion."""

    number: int
    """1-based stage number i"""
    servers: frozenset
    """S_i"""
    types: tuple
    """indices of the types in C_i, i.e. types with all servers in S_i"""
    least_loaded: frozenset
    """L_i, the servers attaining the maximum ratio"""
    car: float
    """CAR_i, the maximum capacity-to-fraction-of-arrival ratio"""
    ratios: tuple
    """(server, ratio) pairs for the servers of S_i hosting types of C_i"""
    typeless: frozenset = frozenset()
    """servers of S_i that host no type of C_i"""

    @property
    def ratio_map(self):
        """ratios as a dict server -> ratio"""
        return dict(self.ratios)


#
# Definition of class SubsystemChain
#


@dataclass(frozen=True)
class SubsystemChain:
    """The complete recursion for one topology."""

    topology: object
    """the decomposed Topology"""
    stages: tuple
    """tuple of Stage, stage i at position i-1"""
    least_loaded: tuple
    """R(c) as a frozenset for every type index"""
    removal_stage: tuple
    """number of the stage at which every type is removed"""

    @property
    def i_star(self):
        """last stage with a nonempty type set"""
        return len(self.stages)

    @property
    def cars(self):
        return tuple(stage.car for stage in self.stages)

    @property
    def lambda_R(self):
        """min_i CAR_i"""
        return min(self.cars)

    def stage(self, number):
        """stage by its 1-based number"""
        if not 1 <= number <= self.i_star:
            raise StabilityError("stage {} out of range 1..{}".format(
                number, self.i_star))
        return self.stages[number - 1]

    def home_stage(self, server):
        """Last stage in which ``server`` hosts a remaining type.

        For servers in some L_i this is i. Other servers stay until
        their last type is removed; the next stage lists them as
        typeless and drops them from S. Returns None
        for servers that host no type at all.
        """
        home = None
        for stage in self.stages:
            if server in stage.servers and server not in stage.typeless:
                home = stage.number
        return home

    def stage_of_server(self, server):
        """number i with server in L_i, or None"""
        for stage in self.stages:
            if server in stage.least_loaded:
                return stage.number
        return None

    def removed_servers(self):
        """union of all L_i"""
        return frozenset().union(*(stage.least_loaded
                                   for stage in self.stages))

    def surviving_servers(self):
        """servers of the last stage that are in no L_i"""
        return self.stages[-1].servers - self.removed_servers()

    def bottleneck_stages(self):
        """numbers of all stages whose CAR equals the minimum"""
        minimum = self.lambda_R
        return tuple(stage.number for stage in self.stages
                     if compare(stage.car, minimum) == 0)

    def first_saturated_stage(self, lam):
        """first stage with lam >= CAR_i, or None"""
        for stage in self.stages:
            if compare(lam, stage.car) >= 0:
                return stage.number
        return None

    def reduced_capacity_bound(self):
        """Frontier of the reduced system of independent servers.

        Every type-c job is sent only to the servers R(c); the value is
        min over those servers of mu_s / sum_{c: s in R(c)} p_c and
        coincides with lambda_R.
        """
        topology = self.topology
        mass = {}
        for index, servers in enumerate(self.least_loaded):
            for server in servers:
                mass.setdefault(server, []).append(topology.types[index].p)
        return min(topology.capacities[server] / math.fsum(masses)
                   for server, masses in mass.items())


def subsystem_chain(topology):
    """Run the subsystem recursion.

    Parameters
    ----------
    topology : Topology

    Returns
    -------
    SubsystemChain
    """
    capacities = topology.capacities
    types = topology.types
    remaining = frozenset(range(topology.num_servers))
    alive = list(range(len(types)))
    stages = []
    least_loaded = [None] * len(types)
    removal_stage = [None] * len(types)
    while alive:
        number = len(stages) + 1
        masses = {server: [] for server in remaining}
        for index in alive:
            for server in types[index].servers:
                masses[server].append(types[index].p)
        ratios = tuple((server, capacities[server] / math.fsum(masses[server]))
                       for server in sorted(remaining) if masses[server])
        typeless = frozenset(server for server in remaining
                             if not masses[server])
        car = max(ratio for _, ratio in ratios)
        removed = frozenset(server for server, ratio in ratios
                            if compare(ratio, car) == 0)
        assert removed, "the maximum ratio must be attained"
        stages.append(Stage(number, remaining, tuple(alive), removed, car,
                            ratios, typeless))
        still_alive = []
        for index in alive:
            hit = removed & types[index].server_set
            if hit:
                least_loaded[index] = hit
                removal_stage[index] = number
            else:
                still_alive.append(index)
        alive = still_alive
        remaining = remaining - removed - typeless
    return SubsystemChain(topology, tuple(stages), tuple(least_loaded),
                          tuple(removal_stage))


def lambda_R(topology):
    """Maximum stable arrival rate under redundancy, min_i CAR_i.

    The arrival rate stored in the topology is ignored.
    """
    return subsystem_chain(topology).lambda_R


def classify_servers(topology, lam=None, chain=None):
    """Stability verdict of every server at arrival rate lam.

    A server with home stage i is stable if lam < CAR_l for all l <= i,
    unstable if lam > CAR_l for some l <= i and critical otherwise.
    Servers hosting no type are stable.

    Parameters
    ----------
    topology : Topology
    lam : float, optional
        arrival rate, defaults to topology.lam
    chain : SubsystemChain, optional
        precomputed recursion

    Returns
    -------
    dict
        server -> Verdict
    """
    lam = topology.lam if lam is None else lam
    chain = chain or subsystem_chain(topology)
    verdicts = {}
    for server in range(topology.num_servers):
        home = chain.home_stage(server)
        if home is None:
            verdicts[server] = Verdict.stable
            continue
        signs = [compare(lam, stage.car) for stage in chain.stages[:home]]
        if max(signs) > 0:
            verdicts[server] = Verdict.unstable
        elif max(signs) == 0:
            verdicts[server] = Verdict.critical
        else:
            verdicts[server] = Verdict.stable
    return verdicts


def lower_bound_capacities(chain, stage_number):
    """Capacities of the lower-bound system built on a stage.

    mu_s^LB = CAR_i * sum_{c in C_i(s)} p_c for the servers of S_i, zero
    elsewhere.

    Returns
    -------
    numpy.ndarray
        one capacity per server of the topology
    """
    stage = chain.stage(stage_number)
    types = chain.topology.types
    capacities = np.zeros(chain.topology.num_servers)
    for index in stage.types:
        for server in types[index].servers:
            capacities[server] += stage.car * types[index].p
    return capacities
