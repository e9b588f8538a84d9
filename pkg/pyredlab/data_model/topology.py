"""Topology of a redundancy system.

A topology fixes the servers (by their capacities), the job types (each a
set of compatible servers with an arrival probability) and the Poisson
arrival rate. Topologies are immutable and validated on construction.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import TopologyError


PROBABILITY_SUM_TOL = 1e-12
"""absolute tolerance on the sum of the type probabilities"""

TOPOLOGY_KEYS = frozenset(("capacities", "types", "lambda"))
"""keys accepted in the JSON representation of a topology"""

TYPE_KEYS = frozenset(("servers", "p"))
"""keys accepted in the JSON representation of a job type"""


#
# Definition of class JobType
#


@dataclass(frozen=True)
class JobType:
    """A job type: the subset of compatible servers and its probability."""

    servers: tuple
    """sorted tuple of 0-based server indices"""
    p: float
    """probability that an arriving job has this type"""

    def __post_init__(self):
        object.__setattr__(self, "servers", tuple(sorted(self.servers)))
        object.__setattr__(self, "p", float(self.p))

    def __contains__(self, server):
        return server in self.servers

    def __len__(self):
        return len(self.servers)

    @property
    def server_set(self):
        """the servers as a frozenset"""
        return frozenset(self.servers)

    def label(self):
        """1-based human-readable label such as ``{1,2}``"""
        return "{" + ",".join(str(s + 1) for s in self.servers) + "}"

    def to_dict(self):
        """JSON representation"""
        return {"servers": list(self.servers), "p": self.p}


#
# Definition of class Topology
#


@dataclass(frozen=True)
class Topology:
    """Servers, job types and arrival rate of a redundancy system.

    Construction validates all invariants (see validate_topology) and
    raises TopologyError on the first violation.
    """

    capacities: tuple
    """service rate of each server"""
    types: tuple
    """tuple of JobType"""
    lam: float = 0.0
    """Poisson arrival rate of jobs"""
    _by_server: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "capacities",
                           tuple(float(mu) for mu in self.capacities))
        object.__setattr__(self, "types", tuple(
            job_type if isinstance(job_type, JobType)
            else JobType(*job_type) for job_type in self.types))
        object.__setattr__(self, "lam", float(self.lam))
        validate_topology(self)
        by_server = [[] for _ in self.capacities]
        for index, job_type in enumerate(self.types):
            for server in job_type.servers:
                by_server[server].append(index)
        object.__setattr__(self, "_by_server",
                           tuple(tuple(indices) for indices in by_server))

    @property
    def num_servers(self):
        """number K of servers"""
        return len(self.capacities)

    @property
    def probabilities(self):
        """tuple of type probabilities, in type order"""
        return tuple(job_type.p for job_type in self.types)

    def types_of_server(self, server):
        """indices of the types that have ``server`` as compatible server"""
        return self._by_server[server]

    def type_index(self, servers):
        """index of the type with the given server set"""
        wanted = tuple(sorted(servers))
        for index, job_type in enumerate(self.types):
            if job_type.servers == wanted:
                return index
        raise KeyError(wanted)

    def with_arrival_rate(self, lam):
        """copy with a different arrival rate"""
        return Topology(self.capacities, self.types, lam)

    def scaled(self, factor):
        """copy with all capacities multiplied by ``factor``"""
        return Topology(tuple(factor * mu for mu in self.capacities),
                        self.types, self.lam)

    def permuted(self, order):
        """Relabel the servers.

        Parameters
        ----------
        order : sequence of int
            ``order[new] = old``, a permutation of range(K)

        Returns
        -------
        Topology
            server ``new`` of the result is server ``order[new]`` of self
        """
        assert sorted(order) == list(range(self.num_servers)), \
            "order must be a permutation of the server indices"
        new_index = {old: new for new, old in enumerate(order)}
        return Topology(
            tuple(self.capacities[old] for old in order),
            tuple(JobType(tuple(new_index[s] for s in job_type.servers),
                          job_type.p) for job_type in self.types),
            self.lam)

    def to_dict(self):
        """JSON representation (0-based server indices)"""
        return {"capacities": list(self.capacities),
                "types": [job_type.to_dict() for job_type in self.types],
                "lambda": self.lam}

    @classmethod
    def from_dict(cls, raw, field_prefix="topology"):
        """Build a topology from its JSON representation.

        Parameters
        ----------
        raw : dict
            ``{"capacities": [...], "types": [{"servers": [...], "p": ...}],
            "lambda": ...}``; ``lambda`` defaults to 0
        field_prefix : str
            prefix used in error messages

        Raises
        ------
        TopologyError
            on unknown keys, missing keys or violated invariants
        """
        if not isinstance(raw, dict):
            raise TopologyError("must be a JSON object", field=field_prefix)
        unknown = set(raw) - TOPOLOGY_KEYS
        if unknown:
            raise TopologyError("unknown key(s) {}".format(sorted(unknown)),
                                field=field_prefix)
        for key in ("capacities", "types"):
            if key not in raw:
                raise TopologyError("missing key",
                                    field="{}.{}".format(field_prefix, key))
        types = []
        for index, raw_type in enumerate(raw["types"]):
            type_field = "{}.types[{}]".format(field_prefix, index)
            if not isinstance(raw_type, dict):
                raise TopologyError("must be a JSON object", field=type_field)
            unknown = set(raw_type) - TYPE_KEYS
            if unknown:
                raise TopologyError(
                    "unknown key(s) {}".format(sorted(unknown)),
                    field=type_field)
            if set(raw_type) != TYPE_KEYS:
                raise TopologyError("needs 'servers' and 'p'",
                                    field=type_field)
            types.append(JobType(_server_list(raw_type["servers"],
                                              type_field),
                                 raw_type["p"]))
        try:
            return cls(tuple(raw["capacities"]), tuple(types),
                       raw.get("lambda", 0.0))
        except TopologyError as error:
            if error.field is not None:
                error.field = "{}.{}".format(field_prefix, error.field)
            raise
        except (TypeError, ValueError) as error:
            raise TopologyError(str(error), field=field_prefix) from error

    @classmethod
    def load(cls, path):
        """Read a topology from a JSON file."""
        with open(Path(path)) as topology_file:
            return cls.from_dict(json.load(topology_file))

    def save(self, path):
        """Write the topology as JSON."""
        with open(Path(path), "w") as topology_file:
            json.dump(self.to_dict(), topology_file, indent=2)


def _server_list(raw_servers, type_field):
    """check that a server list consists of integers"""
    if not isinstance(raw_servers, list) or not all(
            isinstance(s, int) and not isinstance(s, bool)
            for s in raw_servers):
        raise TopologyError("must be a list of server indices",
                            field=type_field + ".servers")
    return raw_servers


def validate_topology(topology):
    """Check all topology invariants.

    Parameters
    ----------
    topology : Topology

    Returns
    -------
    Topology
        the unchanged input

    Raises
    ------
    TopologyError
        naming the first violated invariant
    """
    capacities = topology.capacities
    if len(capacities) == 0:
        raise TopologyError("at least one server is needed",
                            field="capacities")
    for server, mu in enumerate(capacities):
        if not (math.isfinite(mu) and mu > 0):
            raise TopologyError(
                "capacity of server {} must be positive and finite, got {!r}"
                .format(server, mu), field="capacities[{}]".format(server))
    if not (math.isfinite(topology.lam) and topology.lam >= 0):
        raise TopologyError("arrival rate must be non-negative, got {!r}"
                            .format(topology.lam), field="lambda")
    if len(topology.types) == 0:
        raise TopologyError("at least one job type is needed", field="types")
    seen = set()
    for index, job_type in enumerate(topology.types):
        type_field = "types[{}]".format(index)
        if len(job_type.servers) == 0:
            raise TopologyError("server set is empty",
                                field=type_field + ".servers")
        if len(set(job_type.servers)) != len(job_type.servers):
            raise TopologyError("server set {} has duplicates".format(
                list(job_type.servers)), field=type_field + ".servers")
        for server in job_type.servers:
            if not 0 <= server < len(capacities):
                raise TopologyError(
                    "server index {} out of range (K={})".format(
                        server, len(capacities)),
                    field=type_field + ".servers")
        if job_type.servers in seen:
            raise TopologyError("duplicate type {}".format(
                list(job_type.servers)), field=type_field + ".servers")
        seen.add(job_type.servers)
        if not (math.isfinite(job_type.p) and 0 < job_type.p <= 1):
            raise TopologyError("probability must lie in (0, 1], got {!r}"
                                .format(job_type.p), field=type_field + ".p")
    total = math.fsum(job_type.p for job_type in topology.types)
    if abs(total - 1.0) > PROBABILITY_SUM_TOL:
        raise TopologyError("probabilities sum to {:.12g}".format(total),
                            field="types")
    return topology
