"""Test file for the Bernoulli and static-split frontiers."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import numpy as np
import pytest

from pyredlab.data_model import (Topology, geometric_capacities, make_nested,
                                 make_red_d)
from pyredlab.stability import (bernoulli_loads, lambda_B, lambda_J,
                                lambda_R)


def test_bernoulli_red_d_geometric():
    """Homogeneous arrivals give K times the slowest server."""
    for mu in (1.0, 1.4, 3.0):
        topology = make_red_d(5, 2, geometric_capacities(5, mu))
        assert lambda_B(topology) == pytest.approx(5.0)


def test_bernoulli_n_model():
    topology = make_nested("N", (1, 2), (0.8, 0.2))
    assert lambda_B(topology) == pytest.approx(min(2 / 0.2, 4 / 1.8))
    assert bernoulli_loads(topology) == pytest.approx([0.1, 0.9])


def test_single_server():
    topology = Topology((3,), (((0,), 1.0),))
    assert lambda_B(topology) == pytest.approx(3.0)
    assert lambda_J(topology) == pytest.approx(3.0)
    assert lambda_R(topology) == pytest.approx(3.0)


def _w_split_brute_force(mu1, mu2, p1, p2, p12):
    best = 0.0
    for x in np.linspace(0, 1, 100001):
        load1, load2 = p1 + x * p12, p2 + (1 - x) * p12
        best = max(best, min(mu1 / load1 if load1 else np.inf,
                             mu2 / load2 if load2 else np.inf))
    return best


def test_static_split_w_model():
    topology = make_nested("W", (1, 2), (0.35, 0.40, 0.25))
    assert lambda_J(topology) == pytest.approx(1 / 0.35, rel=1e-6)
    assert lambda_J(topology) == pytest.approx(
        _w_split_brute_force(1, 2, 0.35, 0.40, 0.25), rel=1e-4)


def test_static_split_full_flexibility():
    topology = make_red_d(3, 3, (1, 2, 4))
    assert lambda_J(topology) == pytest.approx(7.0)


def test_static_split_disjoint_singletons():
    topology = Topology((1, 2, 3), (((0,), 0.2), ((1,), 0.5), ((2,), 0.3)))
    assert lambda_J(topology) == pytest.approx(min(1 / 0.2, 2 / 0.5,
                                                   3 / 0.3), rel=1e-8)


def test_frontier_ordering(example):
    """Neither redundancy nor Bernoulli beats the best static split."""
    assert lambda_B(example) <= lambda_J(example) * (1 + 1e-9)
    assert lambda_R(example) <= lambda_J(example) * (1 + 1e-9)
