"""Shared fixtures of the test suite."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import numpy as np
import pytest

from pyredlab.data_model import JobType, Topology


EXAMPLE_CAPACITIES = (1.0, 2.0, 4.0, 5.0)
EXAMPLE_TYPES = (((0, 1), 0.25), ((0, 2), 0.1), ((0, 3), 0.1),
                 ((1, 2), 0.2), ((1, 3), 0.2), ((2, 3), 0.15))


def example_topology(lam=0.0):
    """four servers, every pair of servers a type, heterogeneous capacities"""
    return Topology(EXAMPLE_CAPACITIES,
                    tuple(JobType(servers, p) for servers, p in EXAMPLE_TYPES),
                    lam)


def random_topology(rng, max_servers=5):
    """2..max_servers servers, random type sets and Dirichlet probabilities"""
    num_servers = int(rng.integers(2, max_servers + 1))
    sets = set()
    while len(sets) < int(rng.integers(1, 2 ** num_servers)):
        size = int(rng.integers(1, num_servers + 1))
        sets.add(tuple(sorted(rng.choice(num_servers, size, replace=False)
                              .tolist())))
    probs = rng.dirichlet(np.ones(len(sets)))
    probs = probs / probs.sum()
    types = tuple(JobType(servers, p) for servers, p in zip(sorted(sets),
                                                           probs))
    capacities = tuple(rng.uniform(0.5, 4.0, num_servers))
    return Topology(capacities, types)


@pytest.fixture
def example():
    return example_topology()
