"""Generators for the canonical topologies.

Redundancy-d systems with homogeneous arrivals, the nested N, W, WW and
WWWW models, and the two capacity families (geometric and linear) used to
study heterogeneous servers.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from itertools import combinations
from math import comb

from ..errors import ConfigurationError
from .topology import JobType, Topology


def _ww_types(offset=0):
    """type sets of a WW block on servers offset..offset+3"""
    a, b, c, d = (offset + i for i in range(4))
    return ((a,), (b,), (c,), (d,), (a, b), (c, d), (a, b, c, d))


NESTED_TYPE_SETS = {
    "N": ((1,), (0, 1)),
    "W": ((0,), (1,), (0, 1)),
    "WW": _ww_types(),
    "WWWW": _ww_types() + _ww_types(4) + (tuple(range(8)),),
}
"""server sets (0-based) of the nested models, in probability order"""

NESTED_SERVER_COUNTS = {"N": 2, "W": 2, "WW": 4, "WWWW": 8}


def geometric_capacities(num_servers, mu):
    """capacities mu_k = mu^(k-1), k = 1..K"""
    return tuple(float(mu) ** k for k in range(num_servers))


def linear_capacities(num_servers, upper):
    """capacities increasing linearly from 1 to ``upper``

    mu_k = 1 + (M-1)/(K-1) (k-1), k = 1..K
    """
    if num_servers == 1:
        return (1.0,)
    step = (upper - 1.0) / (num_servers - 1)
    return tuple(1.0 + step * k for k in range(num_servers))


def make_red_d(num_servers, d, capacities, lam=0.0):
    """Redundancy-d topology with homogeneous arrivals.

    Every d-subset of the K servers is a type with probability 1/C(K, d).

    Parameters
    ----------
    num_servers : int
        K
    d : int
        number of copies, 1 <= d <= K
    capacities : sequence of float
        K server capacities
    lam : float, optional
        arrival rate

    Returns
    -------
    Topology
    """
    if not 1 <= d <= num_servers:
        raise ConfigurationError(
            "need 1 <= d <= K, got d={} and K={}".format(d, num_servers),
            field="d")
    if len(capacities) != num_servers:
        raise ConfigurationError(
            "expected {} capacities, got {}".format(num_servers,
                                                    len(capacities)),
            field="capacities")
    p = 1.0 / comb(num_servers, d)
    types = tuple(JobType(servers, p)
                  for servers in combinations(range(num_servers), d))
    return Topology(tuple(capacities), types, lam)


def make_nested(kind, capacities, probs=None, lam=0.0):
    """Nested topology of the given kind.

    Parameters
    ----------
    kind : str
        one of "N", "W", "WW", "WWWW"
    capacities : sequence of float
        2, 2, 4 or 8 capacities
    probs : sequence of float, optional
        probability of each type in the order of NESTED_TYPE_SETS[kind];
        uniform 1/|C| if omitted. Types with probability 0 are left out.
    lam : float, optional
        arrival rate

    Returns
    -------
    Topology
    """
    if kind not in NESTED_TYPE_SETS:
        raise ConfigurationError("unknown nested model {!r}".format(kind),
                                 field="kind")
    type_sets = NESTED_TYPE_SETS[kind]
    if len(capacities) != NESTED_SERVER_COUNTS[kind]:
        raise ConfigurationError(
            "{}-model needs {} capacities, got {}".format(
                kind, NESTED_SERVER_COUNTS[kind], len(capacities)),
            field="capacities")
    if probs is None:
        probs = [1.0 / len(type_sets)] * len(type_sets)
    if len(probs) != len(type_sets):
        raise ConfigurationError(
            "{}-model needs {} probabilities, got {}".format(
                kind, len(type_sets), len(probs)), field="probs")
    types = tuple(JobType(servers, p)
                  for servers, p in zip(type_sets, probs) if p > 0)
    return Topology(tuple(capacities), types, lam)


def is_nested(topology):
    """Nesting predicate: every pair of types is nested or disjoint."""
    sets = [job_type.server_set for job_type in topology.types]
    for index, first in enumerate(sets):
        for second in sets[index + 1:]:
            if not (first <= second or second <= first
                    or not first & second):
                return False
    return True
